import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polarize.errors import (
    ContractViolationError,
    GenerationError,
    InvalidDescriptorError,
)
from polarize.general.schema import CVector
from polarize.norms import configuration as norms_configuration
from polarize.norms.evaluation import (
    eval_norm,
    kernel_probes,
    norm_values,
    validate_norm,
)
from polarize.norms.generation import FAMILIES, NormFamily, random_norm
from polarize.norms.schema import (
    DualMax,
    InducedOnC2,
    PNorm,
    WeightedPNorm,
    descriptor_issues,
    dump_descriptor,
    parse_descriptor,
)
from polarize.utils import make_rng

VALID_FIXTURES = [
    'sup_c2',
    'l1_c2',
    'l2_c2',
    'hermitian_c2',
    'hermitian_c2_skew',
    'hermitian_c2_diagonal',
    'dual_max_c2',
    'dual_max_c2_hexagon',
    'dual_max_c2_complex',
    'mixture_l2_sup',
]


def test_parse_infinite_exponent():
    norm = parse_descriptor('{"kind": "pnorm", "p": "inf"}')
    assert norm == PNorm(p=math.inf)
    assert norm.dim is None
    assert dump_descriptor(norm) == {'kind': 'pnorm', 'p': 'inf'}


@pytest.mark.parametrize(
    'data',
    [
        pytest.param({'kind': 'lp', 'p': 2}, id='unknown-kind'),
        pytest.param({'kind': 'pnorm', 'p': 0.5}, id='exponent-below-one'),
        pytest.param({'kind': 'pnorm', 'p': 'two'}, id='exponent-text'),
        pytest.param({'kind': 'pnorm', 'p': 2, 'scale': 3}, id='extra-field'),
        pytest.param(
            {'kind': 'hermitian', 'matrix': [[[1, 0], [0, 0]]]}, id='not-square'
        ),
        pytest.param(
            {'kind': 'weighted_pnorm', 'p': 2, 'weights': [1.0, -1.0]},
            id='negative-weight',
        ),
        pytest.param(
            {
                'kind': 'mixture',
                'parts': [{'kind': 'pnorm', 'p': 1}],
                'coefficients': [0.5, 0.5],
            },
            id='coefficient-count',
        ),
        pytest.param(
            {
                'kind': 'dual_max',
                'functionals': [[[1, 0], [0, 0]]],
            },
            id='too-few-functionals',
        ),
    ],
)
def test_parse_rejects_malformed_descriptors(data):
    with pytest.raises(InvalidDescriptorError) as excinfo:
        parse_descriptor(data)
    assert excinfo.value.issues


@pytest.mark.parametrize('name', VALID_FIXTURES)
def test_fixture_descriptors_survive_a_dump(load_norm, name):
    norm = load_norm(name)
    assert parse_descriptor(dump_descriptor(norm)) == norm


@pytest.mark.parametrize(
    'norm, x, expected',
    [
        pytest.param(PNorm(p=math.inf), [3 + 4j, 1], 5.0, id='sup'),
        pytest.param(PNorm(p=1), [3 + 4j, 1], 6.0, id='l1'),
        pytest.param(PNorm(p=2), [3 + 4j, 1], math.sqrt(26), id='l2'),
        pytest.param(PNorm(p=3), [0, 2j, 0], 2.0, id='l3-single-entry'),
        pytest.param(WeightedPNorm(p=1, weights=(2.0, 1.0)), [1, 1], 3.0, id='w1'),
        pytest.param(
            WeightedPNorm(p=math.inf, weights=(2.0, 1.0)), [1, 3j], 3.0, id='w-sup'
        ),
    ],
)
def test_eval_norm_closed_forms(norm, x, expected):
    assert eval_norm(norm, CVector.from_complex(x)) == pytest.approx(expected)


def test_hermitian_norm_of_basis_vectors(load_norm):
    norm = load_norm('hermitian_c2')
    assert eval_norm(norm, CVector.basis(2, 0)) == pytest.approx(math.sqrt(2))
    assert eval_norm(norm, CVector.basis(2, 1)) == pytest.approx(1.0)


def test_hermitian_norm_of_large_vectors(load_norm):
    norm = load_norm('hermitian_c2_diagonal')
    assert eval_norm(norm, CVector.from_complex([1e200, 0])) == pytest.approx(2e200)
    assert eval_norm(norm, CVector.from_complex([0, 1e200])) == pytest.approx(5e199)
    big = CVector.from_complex([3e200, 4e200j])
    assert eval_norm(norm, big) == pytest.approx(math.sqrt(40) * 1e200)


def test_dual_max_norm_is_largest_functional(load_norm):
    norm = load_norm('dual_max_c2')
    assert eval_norm(norm, CVector.from_complex([1, -1])) == pytest.approx(1.0)
    assert eval_norm(norm, CVector.from_complex([1, 1])) == pytest.approx(2.0)


def test_norm_values_keeps_batch_shape(sup_norm):
    arr = np.ones((3, 4, 2), dtype=np.complex128)
    assert norm_values(sup_norm, arr).shape == (3, 4)


def test_dimension_mismatch_is_rejected(sup_norm):
    with pytest.raises(ContractViolationError):
        eval_norm(sup_norm, CVector.from_complex([1, 2, 3]))


def test_non_finite_components_are_rejected(sup_norm):
    with pytest.raises(ContractViolationError):
        norm_values(sup_norm, np.array([1.0, np.nan]))


def test_evaluating_an_invalid_descriptor_raises(load_norm):
    norm = load_norm('not_positive_definite')
    assert descriptor_issues(norm)
    with pytest.raises(InvalidDescriptorError) as excinfo:
        eval_norm(norm, CVector.basis(2, 0))
    assert any('positive definite' in issue for issue in excinfo.value.issues)


@pytest.mark.parametrize('name', VALID_FIXTURES)
def test_fixture_norms_validate(load_norm, name):
    report = validate_norm(load_norm(name), 200, 0)
    assert report.passed, report.failures()
    assert report.dim == 2


def test_validate_norm_reports_instead_of_raising(load_norm):
    report = validate_norm(load_norm('not_positive_definite'), 50, 0)
    assert not report.passed
    assert report.check('descriptor').passed is False
    assert report.check('definiteness').passed is False
    assert report.issues


def test_validate_norm_finds_kernel_of_degenerate_functionals():
    norm = DualMax(functionals=(CVector.from_complex([1, 0]),) * 2)
    report = validate_norm(norm, 20, 0)
    definiteness = report.check('definiteness')
    # stored as floor <= ratio
    assert definiteness.rhs == pytest.approx(0.0, abs=1e-15)
    assert definiteness.passed is False
    assert report.passed is False


def test_validate_norm_needs_samples(sup_norm):
    with pytest.raises(ContractViolationError):
        validate_norm(sup_norm, 0, 0)


def test_kernel_probes_are_euclidean_unit_vectors(load_norm):
    probes = kernel_probes(load_norm('hermitian_c2'), 2)
    assert np.allclose(np.linalg.norm(probes, axis=-1), 1.0)
    # smallest eigenvector first, then the standard basis
    assert len(probes) == 3


@given(
    seed=st.integers(0, 2**32),
    scale=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3),
)
def test_fixture_norms_are_absolutely_homogeneous(seed, scale):
    norm = parse_descriptor(
        {
            'kind': 'hermitian',
            'matrix': [[[2.0, 0.0], [0.5, 0.5]], [[0.5, -0.5], [1.0, 0.0]]],
        }
    )
    rng = make_rng(seed)
    x = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert eval_norm(norm, CVector.from_complex(scale * x)) == pytest.approx(
        abs(scale) * eval_norm(norm, CVector.from_complex(x)), rel=1e-9
    )


@pytest.mark.parametrize('family', FAMILIES)
@pytest.mark.parametrize('dim', [2, 3])
def test_random_norm_is_reproducible(family, dim):
    first = random_norm(family, dim, 7)
    assert first == random_norm(family, dim, 7)
    assert dump_descriptor(first) == dump_descriptor(random_norm(family.value, dim, 7))


@pytest.mark.parametrize('family', FAMILIES)
@given(seed=st.integers(0, 2**63 - 1), dim=st.integers(2, 3))
def test_random_norms_are_valid(family, seed, dim):
    norm = random_norm(family, dim, seed)
    assert descriptor_issues(norm) == ()
    report = validate_norm(norm, 100, seed)
    assert report.passed, report.failures()


@pytest.mark.parametrize('dim', [2, 3, 4])
def test_induced_family_lives_on_c2(dim):
    norm = random_norm(NormFamily.INDUCED_C2, dim, 11)
    assert isinstance(norm, InducedOnC2)
    assert norm.dim == 2
    assert norm.a.dim == max(dim, 2)


def test_unknown_family_is_rejected():
    with pytest.raises(ContractViolationError):
        random_norm('banach', 2, 0)


def test_random_norm_gives_up_on_norms_failing_validation(monkeypatch):
    monkeypatch.setattr(norms_configuration, 'max_retries', 3)
    monkeypatch.setattr(norms_configuration, 'definiteness_floor', 1e9)
    with pytest.raises(GenerationError, match='after 3 attempts'):
        random_norm(NormFamily.PNORM, 2, 0)
