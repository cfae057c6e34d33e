import math

import numpy as np
from pydantic import Field

from polarize.errors import ContractViolationError
from polarize.general.schema import Check, CheckReport, CVector
from polarize.norms.evaluation import eval_norm
from polarize.norms.schema import NormDescriptor
from polarize.product import configuration
from polarize.product.polarization import (
    phase_homogeneity_defect_at,
    polarization_product,
)


class PropertyReport(CheckReport):
    pass


class UnitSquareReport(CheckReport):
    @property
    def excess(self) -> tuple[float, float]:
        """
        `(max(|Re|, |Im|) - 1, |<x|y>| - sqrt(2))`, both non-positive when the
        bounds hold.
        """
        return tuple(check.excess for check in self.checks)


class PhaseIdentityReport(CheckReport):
    phi: float
    phase_defect: float = Field(
        description='|<e^{i phi} x|y> - e^{i phi} <x|y>|, measured but not checked.'
    )


def _scaled(x: CVector, factor: complex) -> CVector:
    return CVector.from_complex(factor * x.array)


def _value(descriptor: NormDescriptor, x: CVector, y: CVector) -> complex:
    return polarization_product(descriptor, x, y).value


def check_algebraic_properties(
    descriptor: NormDescriptor, x: CVector, y: CVector, r: float
) -> PropertyReport:
    if not math.isfinite(r):
        raise ContractViolationError('r must be finite.')
    tol = configuration.property_tol
    base = polarization_product(descriptor, x, y)
    xy = base.value
    yx = _value(descriptor, y, x)
    xx = polarization_product(descriptor, x, x)
    scale = base.norm_x * base.norm_y
    r_scale = (1 + abs(r)) * scale
    self_scale = xx.norm_x**2

    checks = [
        Check.residual('conjugate_symmetry', xy - yx.conjugate(), tol * scale),
        Check.residual(
            'self_product_real',
            xx.value.imag,
            configuration.self_product_tol * self_scale,
        ),
        Check.lower('self_product_nonnegative', xx.value.real, 0.0, tol * self_scale),
    ]
    if xx.norm_x > 0:
        checks.append(
            Check.lower('self_product_definite', xx.value.real, 0.5 * self_scale, 0.0)
        )
    else:
        checks.append(Check.residual('self_product_definite', abs(xx.value), 0.0))
    checks += [
        Check.residual(
            'real_homogeneity_first',
            _value(descriptor, _scaled(x, r), y) - r * xy,
            tol * r_scale,
        ),
        Check.residual(
            'real_homogeneity_second',
            _value(descriptor, x, _scaled(y, r)) - r * xy,
            tol * r_scale,
        ),
        Check.residual(
            'imaginary_homogeneity_first',
            _value(descriptor, _scaled(x, 1j * r), y) - 1j * r * xy,
            tol * r_scale,
        ),
        Check.residual(
            'imaginary_homogeneity_second',
            _value(descriptor, x, _scaled(y, -1j * r)) - 1j * r * xy,
            tol * r_scale,
        ),
        Check.residual(
            'norm_from_product',
            xx.norm_x - math.sqrt(max(xx.value.real, 0.0)),
            configuration.self_product_tol * xx.norm_x,
        ),
    ]
    return PropertyReport(checks=checks)


def _require_unit(descriptor: NormDescriptor, *vectors: CVector) -> None:
    for vector in vectors:
        norm = eval_norm(descriptor, vector)
        if abs(norm - 1) > configuration.unit_tol:
            raise ContractViolationError(
                f'Expected a unit vector, got norm {norm!r}. Normalize first.'
            )


def check_unit_square_bound(
    descriptor: NormDescriptor, x: CVector, y: CVector
) -> UnitSquareReport:
    """
    For unit vectors the product lies in the square `[-1, 1] + i[-1, 1]`,
    hence in the disc of radius sqrt(2).
    """
    _require_unit(descriptor, x, y)
    value = _value(descriptor, x, y)
    tol = configuration.property_tol
    return UnitSquareReport(
        checks=[
            Check.upper('unit_square', max(abs(value.real), abs(value.imag)), 1.0, tol),
            Check.upper('sqrt2_disc', abs(value), math.sqrt(2), tol),
        ]
    )


def check_phase_identities(
    descriptor: NormDescriptor, x: CVector, y: CVector, phi: float
) -> PhaseIdentityReport:
    tol = configuration.property_tol
    rotation = complex(np.exp(1j * phi))
    base = polarization_product(descriptor, x, y)
    xy = base.value
    xx = polarization_product(descriptor, x, x)
    scale = base.norm_x * base.norm_y
    self_scale = xx.norm_x**2

    checks = [
        Check.residual(
            'self_phase',
            _value(descriptor, _scaled(x, rotation), x) - rotation * xx.value,
            tol * self_scale,
        ),
        Check.residual(
            'joint_phase',
            _value(descriptor, _scaled(x, rotation), _scaled(y, rotation)) - xy,
            tol * scale,
        ),
    ]
    for name, factor in (
        ('half_turn', -1),
        ('quarter_turn', 1j),
        ('three_quarter_turn', -1j),
    ):
        checks.append(
            Check.residual(
                name,
                _value(descriptor, _scaled(x, factor), y) - factor * xy,
                tol * scale,
            )
        )
    return PhaseIdentityReport(
        phi=phi,
        phase_defect=phase_homogeneity_defect_at(descriptor, x, y, phi),
        checks=checks,
    )
