"""
Recomputes the published numbers behind the polarization product and the
Cauchy-Schwarz argument and compares them with their closed forms.
"""

import math
from math import sqrt

import numpy as np
from pydantic import BaseModel

from polarize.csb.inequalities import (
    HALF_SQRT2,
    SQRT2,
    b_star,
    g_diagonal_minimum,
    g_diagonal_minimum_numeric,
    inequality_D,
    locus_t,
    r_function,
    r_function_argmin,
)
from polarize.general.schema import Check, CheckReport, ComplexScalar, CVector
from polarize.norms.schema import PNorm
from polarize.product.polarization import polarization_product

SUP_NORM = PNorm(p=math.inf)
EXAMPLE_X = CVector.from_complex([complex(1, math.sqrt(15)) / 4, complex(2, 2) / 4])
EXAMPLE_Y = CVector.from_complex([complex(2, 1) / 4, complex(3, math.sqrt(7)) / 4])
EXAMPLE_PHI = math.pi / 3
# e^{i pi/3} <x|y> rounded to three decimals
PHASE_TIMES_PRODUCT = complex(0.130, 0.598)


class ReproductionRow(BaseModel):
    name: str
    expected: ComplexScalar
    computed: ComplexScalar
    error: float
    tolerance: float


class ReproductionReport(CheckReport):
    rows: list[ReproductionRow]
    modulus_gap: float


def example_product() -> complex:
    """`<x|y>` of the sup-norm example as radicals."""
    real = 19 + 4 * sqrt(7) + 2 * sqrt(15)
    imag = 7 - 4 * sqrt(7) + 4 * sqrt(15)
    return complex(real, imag) / 64


def example_rotated_product() -> complex:
    """`<e^{i pi/3} x|y>` of the sup-norm example as radicals."""
    p = 11 + 2 * (sqrt(7) + sqrt(21) - sqrt(45)) - 5 * sqrt(3) + sqrt(15)
    q = 8 + 2 * (4 * sqrt(3) - sqrt(7) + sqrt(15) + sqrt(21)) + sqrt(45)
    return complex(p, q) / 64


def reproduce() -> ReproductionReport:
    rotation = complex(np.exp(1j * EXAMPLE_PHI))
    product = polarization_product(SUP_NORM, EXAMPLE_X, EXAMPLE_Y).value
    rotated_x = CVector.from_complex(rotation * EXAMPLE_X.array)
    rotated = polarization_product(SUP_NORM, rotated_x, EXAMPLE_Y).value
    location, value = g_diagonal_minimum()
    numeric_location, numeric_value = g_diagonal_minimum_numeric()
    locus = locus_t(1.0)
    locus_lhs, locus_rhs = inequality_D(locus, 1.0)
    edge_lhs, edge_rhs = inequality_D(HALF_SQRT2, 2.0)

    expected_product = example_product()
    r_squared = r_function(b_star(1.0), 1.0) ** 2
    comparisons = [
        ('product', expected_product, product, 1e-12),
        ('rotated_product', example_rotated_product(), rotated, 1e-12),
        ('phase_times_product', PHASE_TIMES_PRODUCT, rotation * product, 1e-3),
        ('b_star_at_1', (3 - sqrt(3)) / 6, b_star(1.0), 1e-12),
        ('r_squared_at_b_star', 2 + sqrt(3), r_squared, 1e-10),
        ('r_argmin_at_sqrt2', b_star(SQRT2), r_function_argmin(SQRT2), 1e-6),
        ('g_minimum_location', location, numeric_location, 1e-8),
        ('g_minimum_value', value, numeric_value, 1e-8),
        ('g_minimum_radicals', (sqrt(2) + sqrt(6)) / 2, value, 1e-12),
        ('equality_locus_t', SQRT2 / (sqrt(3) - 1), locus, 1e-12),
        ('equality_locus_D', locus_rhs, locus_lhs, 1e-9 * locus_rhs),
        ('constant_difference', 1.0, edge_rhs - edge_lhs, 1e-9),
    ]
    rows = [
        ReproductionRow(
            name=name,
            expected=expected,
            computed=computed,
            error=abs(complex(computed) - complex(expected)),
            tolerance=tolerance,
        )
        for name, expected, computed, tolerance in comparisons
    ]
    gap = abs(abs(rotated) - abs(rotation * product))
    checks = [Check.residual(row.name, row.error, row.tolerance) for row in rows]
    checks.append(Check.lower('modulus_gap', gap, 0.02, 0.0))
    return ReproductionReport(rows=rows, modulus_gap=gap, checks=checks)
