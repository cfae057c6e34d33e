import math

import pytest

from polarize.norms.evaluation import eval_norm
from polarize.reproduction import (
    EXAMPLE_X,
    EXAMPLE_Y,
    SUP_NORM,
    example_product,
    example_rotated_product,
    reproduce,
)


def test_example_vectors_are_unit_vectors():
    assert eval_norm(SUP_NORM, EXAMPLE_X) == pytest.approx(1.0)
    assert eval_norm(SUP_NORM, EXAMPLE_Y) == pytest.approx(1.0)


def test_closed_forms_match_the_decimal_values():
    assert example_product() == pytest.approx(complex(0.58327, 0.18608), abs=1e-5)
    rotated = example_rotated_product()
    assert rotated == pytest.approx(complex(0.11333, 0.62788), abs=1e-5)


def test_reproduce_passes():
    report = reproduce()
    assert report.passed, report.failures()
    assert [row.name for row in report.rows] == [
        'product',
        'rotated_product',
        'phase_times_product',
        'b_star_at_1',
        'r_squared_at_b_star',
        'r_argmin_at_sqrt2',
        'g_minimum_location',
        'g_minimum_value',
        'g_minimum_radicals',
        'equality_locus_t',
        'equality_locus_D',
        'constant_difference',
    ]
    for row in report.rows:
        assert row.error <= row.tolerance


def test_moduli_differ_under_rotation():
    report = reproduce()
    # the norm is not phase homogeneous, so rotating x changes |<x|y>|
    assert report.modulus_gap >= 0.02
    assert report.check('modulus_gap').passed
    assert not math.isclose(
        abs(example_rotated_product()), abs(example_product()), abs_tol=0.02
    )


def test_report_serializes_complex_values():
    data = reproduce().model_dump(mode='json')
    product = data['rows'][0]
    assert product['expected'] == pytest.approx(
        [example_product().real, example_product().imag]
    )
    assert data['passed'] is True


def test_rotated_product_matches_the_rounded_value():
    row = next(row for row in reproduce().rows if row.name == 'phase_times_product')
    assert row.expected == complex(0.130, 0.598)
    assert row.computed == pytest.approx(complex(0.130485, 0.598161), abs=1e-5)
    assert 0 < row.error <= 1e-3
