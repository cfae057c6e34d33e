from enum import Enum
from typing import TYPE_CHECKING, Optional

import structlog
from pydantic import Field

if TYPE_CHECKING:
    from structlog.stdlib import (
        BoundLogger,
    )

from polarize.csb import configuration
from polarize.csb.inequalities import (
    HALF_SQRT2,
    b_star,
    bound_A,
    bound_B,
    g_diagonal_minimum,
    inequality_C,
    inequality_D,
)
from polarize.csb.propositions import (
    check_aux_propositions,
    check_prop_neun,
    decomposition_identities_check,
)
from polarize.csb.reduction import (
    FIRST,
    SECOND,
    OrientationOp,
    StvwQuadruple,
    canonical_orientation,
    compute_stvw,
    induce_c2_norm,
    product_from_stvw,
    require_c2,
)
from polarize.general.schema import Check, CheckReport
from polarize.norms.evaluation import eval_norm
from polarize.norms.schema import NormDescriptor
from polarize.product.polarization import polarization_product


class ProofCase(str, Enum):
    """
    `a`: both `t` and `w` lie in `[1/2, sqrt(2)/2]`; `b`: exactly one of them
    exceeds `sqrt(2)/2`; `c`: both do.
    """

    A = 'a'
    B = 'b'
    C = 'c'


class ProofTrace(CheckReport):
    case: ProofCase
    stvw: StvwQuadruple
    orientation: list[OrientationOp] = Field(default_factory=list)
    final_bound: float = Field(
        description='|4 <(1,0)|(0,1)>|^2 for the normalized, oriented norm.'
    )
    basis_norms: tuple[float, float] = Field(
        (1.0, 1.0),
        description='Norms of (1, 0) and (0, 1) before normalization.',
    )


def _is_low(value: float) -> bool:
    return value <= HALF_SQRT2 + configuration.tie_tol


def assign_case(q: StvwQuadruple) -> ProofCase:
    """Ties with sqrt(2)/2 go to the lower case."""
    low = _is_low(q.t) + _is_low(q.w)
    if low == 2:
        return ProofCase.A
    if low == 1:
        return ProofCase.B
    return ProofCase.C


def _upper(name: str, lhs: float, rhs: float) -> Check:
    tol = configuration.inequality_tol * max(1.0, abs(lhs), abs(rhs))
    return Check.upper(name, lhs, rhs, tol)


def _final_upper(name: str, lhs: float, rhs: float) -> Check:
    return Check.upper(name, lhs, rhs, configuration.final_bound_tol)


def _case_a(q: StvwQuadruple, real: float, imag: float, final: float) -> list[Check]:
    return [
        _upper('case_a_real_bracket', real, 2.0),
        _upper('case_a_imag_bracket', imag, 2.0),
        _final_upper('case_a_final_bound', final, 8.0),
    ]


def _case_b(q: StvwQuadruple, real: float, imag: float, final: float) -> list[Check]:
    _, inv_t, _, inv_w = q.inverses
    tol = 2 * configuration.inequality_tol
    if _is_low(q.t):
        # w is the large one, (A) bounds the real bracket
        estimate, large = bound_A(q), q.w
        checks = [
            estimate,
            Check.lower('case_b_inverse_t_squared', inv_t**2, 2.0, tol),
            _upper('case_b_real_bracket', real, estimate.rhs - 2.0),
            _upper('case_b_imag_bracket', imag, 4 - 1 / large**2),
        ]
    else:
        estimate, large = bound_B(q), q.t
        checks = [
            estimate,
            Check.lower('case_b_inverse_w_squared', inv_w**2, 2.0, tol),
            _upper('case_b_imag_bracket', imag, estimate.rhs - 2.0),
            _upper('case_b_real_bracket', real, 4 - 1 / large**2),
        ]
    chain = 16 - 4 / large**2
    checks += [
        _final_upper('case_b_final_bound', final, chain),
        _final_upper('case_b_chain', chain, 16.0),
    ]
    return checks


def _case_c(q: StvwQuadruple, real: float, imag: float, final: float) -> list[Check]:
    _, inv_t, _, inv_w = q.inverses
    estimate_a, estimate_b = bound_A(q), bound_B(q)
    c_lhs, _ = inequality_C(q)
    d_lhs, d_rhs = inequality_D(q.t, q.w)
    return [
        estimate_a,
        estimate_b,
        _upper('case_c_real_bracket', real, estimate_a.rhs - inv_t**2),
        _upper('case_c_imag_bracket', imag, estimate_b.rhs - inv_w**2),
        _final_upper('case_c_final_bound', final, c_lhs),
        _final_upper('inequality_C', c_lhs, 16.0),
        _upper('inequality_D', d_lhs, d_rhs),
    ]


_CASE_CHAINS = {
    ProofCase.A: _case_a,
    ProofCase.B: _case_b,
    ProofCase.C: _case_c,
}


def _normalize_basis(
    c2: NormDescriptor,
) -> tuple[NormDescriptor, tuple[float, float]]:
    basis_norms = (eval_norm(c2, FIRST), eval_norm(c2, SECOND))
    if all(abs(norm - 1) <= configuration.identity_tol for norm in basis_norms):
        return c2, basis_norms
    return induce_c2_norm(c2, FIRST, SECOND), basis_norms


def verify_csb_proof(
    c2: NormDescriptor, logger: Optional['BoundLogger'] = None
) -> ProofTrace:
    """
    Runs the Cauchy-Schwarz argument for a norm on C^2 as a chain of numeric
    checks. The basis vectors are normalized first and the norm is brought
    into canonical orientation; the quadruple then decides which chain of
    estimates bounds `|4 <(1,0)|(0,1)>|^2` by 16. Failed checks end up in the
    trace with `passed = False`, nothing is raised for them.
    """
    if logger is None:
        logger = structlog.get_logger(__name__)
    require_c2(c2)
    unit, basis_norms = _normalize_basis(c2)
    oriented, ops = canonical_orientation(unit)
    q = compute_stvw(oriented)
    inv_s, inv_t, inv_v, inv_w = q.inverses
    real = inv_s**2 - inv_t**2
    imag = inv_v**2 - inv_w**2
    final = real**2 + imag**2

    checks = [
        Check.lower(f'{name}_at_least_half', value, 0.5, configuration.inequality_tol)
        for name, value in zip('stvw', (q.s, q.t, q.v, q.w))
    ]
    checks += [
        Check.upper('oriented_s_t', q.s, q.t, configuration.tie_tol),
        Check.upper('oriented_v_w', q.v, q.w, configuration.tie_tol),
    ]

    before = polarization_product(unit, FIRST, SECOND).value
    after = polarization_product(oriented, FIRST, SECOND).value
    checks += [
        Check.residual(
            'orientation_preserves_modulus',
            abs(after) - abs(before),
            configuration.identity_tol * max(1.0, abs(before)),
        ),
        Check.residual(
            'stvw_product',
            abs(product_from_stvw(q) - after),
            configuration.identity_tol * max(1.0, abs(after)),
        ),
    ]

    if abs(q.s - q.t) <= configuration.tie_tol:
        checks += [
            _upper('equal_s_t_final_bound', final, inv_v**4),
            _final_upper('equal_s_t_chain', inv_v**4, 16.0),
        ]

    case = assign_case(q)
    checks += _CASE_CHAINS[case](q, real, imag, final)
    checks.append(_final_upper('final_bound', final, 16.0))

    samples = [0.0, 0.5, 1.0] + [b_star(x) for x in (q.t, q.w) if x > 0.5]
    checks += check_prop_neun(q, samples).checks
    location = g_diagonal_minimum()[0]
    checks += decomposition_identities_check(oriented, location, location).checks
    checks += check_aux_propositions(q, oriented).checks

    trace = ProofTrace(
        case=case,
        stvw=q,
        orientation=ops,
        final_bound=final,
        basis_norms=basis_norms,
        checks=checks,
    )
    if trace.passed:
        logger.debug('Proof chain verified', case=case.value, final_bound=final)
    else:
        logger.warning(
            'Proof chain failed',
            kind=c2.kind,
            case=case.value,
            failed=[check.name for check in trace.failures()],
        )
    return trace
