from collections.abc import Iterable
from typing import Optional

import numpy as np

from polarize.csb import configuration
from polarize.csb.inequalities import SQRT2, g_diagonal_minimum, r_function
from polarize.csb.reduction import StvwQuadruple, compute_stvw
from polarize.general.schema import Check, CheckReport
from polarize.norms.evaluation import norm_values
from polarize.norms.schema import NormDescriptor


class PropositionReport(CheckReport):
    pass


def _upper(name: str, lhs: float, rhs: float) -> Check:
    tol = configuration.inequality_tol * max(1.0, abs(lhs), abs(rhs))
    return Check.upper(name, lhs, rhs, tol)


def _collinearity(first, middle, last) -> float:
    """Modulus of the 2x2 determinant of the two difference vectors."""
    d1 = np.subtract(first, middle)
    d2 = np.subtract(last, middle)
    return float(abs(d1[0] * d2[1] - d1[1] * d2[0]))


def check_aux_propositions(
    q: StvwQuadruple, c2: Optional[NormDescriptor] = None
) -> PropositionReport:
    """
    Elementary consequences of the triangle inequality for a canonically
    oriented norm on C^2 with unit basis vectors. With `c2` the quadruple is
    also compared with the norm it claims to describe.
    """
    s, t, v, w = q.s, q.t, q.v, q.w
    inv_s, inv_t, inv_v, inv_w = q.inverses
    diagonal = g_diagonal_minimum()[1]
    checks = [
        _upper('diagonal_bound_s', inv_s, diagonal * max(1.0, inv_w)),
        _upper('diagonal_bound_v', inv_v, diagonal * max(1.0, inv_t)),
    ]
    for name, value in (('s', s), ('v', v)):
        if 2 * value - 1 > configuration.identity_tol:
            checks.append(
                _upper(f'{name}_at_most_ratio', value, value / (2 * value - 1))
            )
    checks += [
        _upper('s_at_most_one', s, 1.0),
        _upper('v_at_most_one', v, 1.0),
    ]
    # the two lines coincide when 2 s t = s + t
    distinct = abs(2 * s * t - (s + t)) > configuration.identity_tol * max(1.0, s + t)
    if distinct and 2 * t - 1 > configuration.identity_tol:
        ratio = t / (2 * t - 1)
        residual = _collinearity((t, -t), (1, 0), (ratio, ratio))
        checks.append(
            Check.residual(
                'collinear_t_triple',
                residual,
                configuration.inequality_tol * max(1.0, t * ratio),
            )
        )
    if distinct and 2 * s - 1 > configuration.identity_tol:
        ratio = s / (2 * s - 1)
        residual = _collinearity((s, s), (1, 0), (ratio, -ratio))
        checks.append(
            Check.residual(
                'collinear_s_triple',
                residual,
                configuration.inequality_tol * max(1.0, s * ratio),
            )
        )
    checks += [
        _upper('min_t_w_at_most_sqrt2', min(t, w), SQRT2),
        _upper('inverse_s_triangle', inv_s, inv_v + inv_t + inv_w),
        _upper('inverse_v_triangle', inv_v, inv_s + inv_t + inv_w),
        _upper('st_difference_at_most_2', inv_s - inv_t, 2.0),
        _upper('st_sum_at_least_2', 2.0, inv_s + inv_t),
        _upper('vw_difference_at_most_2', inv_v - inv_w, 2.0),
        _upper('vw_sum_at_least_2', 2.0, inv_v + inv_w),
    ]
    for alpha_name, inv_alpha in (('s', inv_s), ('t', inv_t)):
        for gamma_name, inv_gamma in (('v', inv_v), ('w', inv_w)):
            pair = f'{alpha_name}{gamma_name}'
            checks += [
                _upper(f'cross_difference_{pair}', abs(inv_alpha - inv_gamma), SQRT2),
                _upper(f'cross_sum_{pair}', SQRT2, inv_alpha + inv_gamma),
            ]
    checks += [
        _upper('s_harmonic_lower', SQRT2 * v * w / (v + w), s),
        _upper('v_harmonic_lower', SQRT2 * s * t / (s + t), v),
    ]
    if c2 is not None:
        actual = compute_stvw(c2)
        residual = max(
            abs(a - b) for a, b in zip(actual.model_dump(), q.model_dump())
        )
        checks.append(
            Check.residual(
                'quadruple_matches_norm',
                residual,
                configuration.identity_tol * max(1.0, *q.model_dump()),
            )
        )
    return PropositionReport(checks=checks)


def check_prop_neun(q: StvwQuadruple, b_samples: Iterable[float]) -> PropositionReport:
    """
    For every real `b`: `1/s <= R(b)` with `w`, and `1/v <= R(b)` with `t`,
    where `R(b, w) = 2 sqrt(1 + 2b^2 - 2b) + sqrt(2) |b| / w`.
    """
    inv_s, _, inv_v, _ = q.inverses
    checks = []
    for b in b_samples:
        checks.append(_upper('r_bound_s', inv_s, r_function(b, q.w)))
        checks.append(_upper('r_bound_v', inv_v, r_function(b, q.t)))
    return PropositionReport(checks=checks)


def decomposition_identities_check(
    c2: NormDescriptor, a: float, b: float
) -> PropositionReport:
    """
    Checks the decompositions of `(1, 1)` along `(1, 0), (0, 1), (1, -i)` and
    of `(1, i)` along `(1, 0), (0, 1), (1, -1)`, then the norm bounds the
    triangle inequality draws from them. The bounds carry the norms of the
    basis vectors, so they hold for any norm on C^2.
    """
    e1 = np.array([1, 0], dtype=np.complex128)
    e2 = np.array([0, 1], dtype=np.complex128)
    minus_i = np.array([1, -1j])
    minus_one = np.array([1, -1], dtype=np.complex128)
    ones = np.array([1, 1], dtype=np.complex128)
    plus_i = np.array([1, 1j])

    p1, p2, p3 = complex(1 - a, -b), complex(1 - b, a), complex(a, b)
    r1, r2, r3 = complex(1 - a, b), complex(a, 1 - b), complex(a, -b)
    first = p1 * e1 + p2 * e2 + p3 * minus_i
    second = r1 * e1 + r2 * e2 + r3 * minus_one
    scale = 1 + abs(a) + abs(b)

    n_e1, n_e2, n_minus_i, n_minus_one, n_ones, n_plus_i = norm_values(
        c2, np.stack([e1, e2, minus_i, minus_one, ones, plus_i])
    )
    bound_ones = abs(p1) * n_e1 + abs(p2) * n_e2 + abs(p3) * n_minus_i
    bound_plus_i = abs(r1) * n_e1 + abs(r2) * n_e2 + abs(r3) * n_minus_one
    checks = [
        Check.residual(
            'decomposition_ones',
            float(np.max(np.abs(first - ones))),
            configuration.identity_tol * scale,
        ),
        Check.residual(
            'decomposition_plus_i',
            float(np.max(np.abs(second - plus_i))),
            configuration.identity_tol * scale,
        ),
        _upper('decomposition_bound_s', float(n_ones), float(bound_ones)),
        _upper('decomposition_bound_v', float(n_plus_i), float(bound_plus_i)),
    ]
    return PropositionReport(checks=checks)

