import math

import numpy as np
import pytest

from polarize.errors import ContractViolationError
from polarize.explorer.conjecture import (
    INNER_PRODUCT_NOT_PHASE_HOMOGENEOUS,
    PHASE_HOMOGENEOUS_NOT_INNER_PRODUCT,
    classify,
    explore_conjecture,
    parallelogram_defect,
)
from polarize.explorer.search import (
    fix_phase,
    grid_max_abs_product,
    max_abs_product,
    max_phase_defect,
    pattern_search,
    unpack_vectors,
    vector_size,
)
from polarize.norms.evaluation import eval_norm
from polarize.norms.generation import FAMILIES, NormFamily, random_norm
from polarize.norms.schema import Mixture, PNorm
from polarize.product.polarization import (
    phase_homogeneity_defect_at,
    polarization_product,
)
from polarize.utils import derive_seed


def test_pattern_search_finds_a_concave_maximum():
    target = np.array([1.0, -2.0])

    def objective(points):
        return -np.sum((points - target) ** 2, axis=-1)

    result = pattern_search(objective, np.zeros(2), max_iter=500)
    assert result.converged
    assert result.x == pytest.approx(target, abs=1e-8)
    assert result.value == pytest.approx(0.0, abs=1e-15)


def test_pattern_search_respects_the_iteration_budget():
    result = pattern_search(
        lambda points: -np.abs(points).sum(axis=-1), np.full(3, 100.0), max_iter=5
    )
    assert result.iterations == 5
    assert not result.converged


def test_unpack_vectors_keeps_the_first_component_real():
    params = np.arange(1.0, 7.0)
    x, y = unpack_vectors(params, 2, 2)
    assert vector_size(2) == 3
    assert x == pytest.approx(np.array([1, 2 + 3j]))
    assert y == pytest.approx(np.array([4, 5 + 6j]))


def test_fix_phase():
    assert fix_phase(np.array([0, -2j, 1])) == pytest.approx(np.array([0, 2, 1j]))
    assert fix_phase(np.zeros(2)) == pytest.approx(np.zeros(2))


def test_euclidean_search_reaches_one(l2_norm):
    report = max_abs_product(l2_norm, 20, 200, 0)
    assert report.best_value == pytest.approx(1.0, abs=1e-8)
    x, y = report.witnesses
    for witness in (x, y):
        assert eval_norm(l2_norm, witness) == pytest.approx(1.0, abs=1e-10)
    # |<x|y>| = 1 for unit vectors forces them onto one complex line
    assert abs(np.vdot(y.array, x.array)) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize(
    'name', ['sup_c2', 'l1_c2', 'dual_max_c2_hexagon', 'mixture_l2_sup']
)
def test_search_respects_cauchy_schwarz(load_norm, name):
    norm = load_norm(name)
    report = max_abs_product(norm, 8, 150, 1)
    assert report.best_value <= 1 + 1e-7
    assert report.best_value >= 1 - 1e-9
    x, y = report.witnesses
    assert abs(polarization_product(norm, x, y).value) == pytest.approx(
        report.best_value
    )


def test_search_is_seeded(sup_norm, monkeypatch):
    monkeypatch.setenv('POLARIZE_THREADS', '1')
    single = max_abs_product(sup_norm, 4, 50, 3)
    monkeypatch.setenv('POLARIZE_THREADS', '4')
    threaded = max_abs_product(sup_norm, 4, 50, 3)
    assert single.model_dump() == threaded.model_dump()
    assert single.seed == 3


def test_search_checks_dimensions_and_budget(sup_norm):
    with pytest.raises(ContractViolationError):
        max_abs_product(sup_norm, 2, 10, 0, dim=3)
    with pytest.raises(ContractViolationError):
        max_abs_product(sup_norm, 0, 10, 0)
    with pytest.raises(ContractViolationError):
        max_phase_defect(sup_norm, 2, 0, 0)


def test_search_without_dimension_defaults_to_c2():
    assert max_abs_product(PNorm(p=3), 2, 20, 0).dim == 2
    assert max_abs_product(PNorm(p=3), 2, 20, 0, dim=3).dim == 3


def test_grid_search(sup_norm):
    report = grid_max_abs_product(sup_norm, resolution=5)
    assert report.iterations == 5**6
    assert report.best_value <= 1 + 1e-7
    assert report.best_value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.slow
def test_search_beats_the_grid(sup_norm):
    grid = grid_max_abs_product(sup_norm, resolution=10)
    search = max_abs_product(sup_norm, 50, 200, 0)
    assert grid.best_value <= 1 + 1e-7
    assert search.best_value <= 1 + 1e-7
    assert search.best_value >= grid.best_value - 1e-6


def test_grid_search_covers_c2_only(load_norm):
    with pytest.raises(ContractViolationError):
        grid_max_abs_product(random_norm(NormFamily.HERMITIAN, 3, 0))
    with pytest.raises(ContractViolationError):
        grid_max_abs_product(load_norm('sup_c2'), resolution=1)


def test_phase_defect_vanishes_for_the_euclidean_norm(l2_norm):
    report = max_phase_defect(l2_norm, 8, 200, 0)
    assert report.best_value <= 1e-8
    assert 0 <= report.phase < 2 * math.pi


def test_phase_defect_vanishes_for_hermitian_norms():
    norm = random_norm(NormFamily.HERMITIAN, 3, 5)
    assert max_phase_defect(norm, 4, 150, 0).best_value <= 1e-8


@pytest.mark.slow
def test_phase_defect_vanishes_for_many_hermitian_norms():
    for seed in range(100):
        norm = random_norm(NormFamily.HERMITIAN, 2 + seed % 3, seed)
        report = max_phase_defect(norm, 4, 150, seed)
        assert report.best_value <= 1e-8, seed


def test_phase_defect_of_the_sup_norm(sup_norm):
    report = max_phase_defect(sup_norm, 24, 400, 0)
    assert report.best_value >= 0.034
    x, y = report.witnesses
    assert phase_homogeneity_defect_at(
        sup_norm, x, y, report.phase
    ) == pytest.approx(report.best_value, abs=1e-12)


def test_parallelogram_defect(l2_norm, sup_norm):
    assert parallelogram_defect(l2_norm, 200, 0) <= 1e-10
    # e1 +- e2 alone gives 1
    assert parallelogram_defect(sup_norm, 200, 0) >= 1.0
    with pytest.raises(ContractViolationError):
        parallelogram_defect(sup_norm, 0, 0)


def test_parallelogram_defect_grows_with_the_perturbation():
    def perturbed(epsilon):
        return Mixture(
            parts=(PNorm(p=2), PNorm(p=math.inf)), coefficients=(1.0, epsilon)
        )

    small = parallelogram_defect(perturbed(1e-3), 200, 0, dim=2)
    large = parallelogram_defect(perturbed(1e-2), 200, 0, dim=2)
    assert 0 < small < large
    assert small <= 1e-2


@pytest.mark.parametrize(
    'parallelogram, phase, expected',
    [
        (1e-12, 1e-12, None),
        (0.5, 0.5, None),
        (0.5, 1e-12, PHASE_HOMOGENEOUS_NOT_INNER_PRODUCT),
        (1e-12, 0.5, INNER_PRODUCT_NOT_PHASE_HOMOGENEOUS),
        (1e-5, 1e-12, None),
    ],
)
def test_classify(parallelogram, phase, expected):
    assert classify(parallelogram, phase) == expected


def test_explore_hermitian_norms_raises_no_flags():
    report = explore_conjecture(['hermitian'], 5, 0, restarts=4, iters=100)
    assert len(report.entries) == 5
    assert report.flags == []
    for entry in report.entries:
        assert entry.family == NormFamily.HERMITIAN
        assert entry.parallelogram_defect <= 1e-8
        assert entry.phase_defect <= 1e-8


def test_explore_cycles_through_families():
    report = explore_conjecture(
        [NormFamily.PNORM, NormFamily.INDUCED_C2], 4, 1, dim=3, restarts=2, iters=50
    )
    assert [entry.family for entry in report.entries] == [
        NormFamily.PNORM,
        NormFamily.INDUCED_C2,
    ] * 2
    assert report.flags == []
    data = report.model_dump(mode='json')
    assert data['flags'] == []
    assert data['families'] == ['pnorm', 'induced_c2']


def test_explore_defaults_to_every_family():
    report = explore_conjecture([], 1, 0, restarts=1, iters=10)
    assert len(report.families) == len(NormFamily)


@pytest.mark.slow
@pytest.mark.parametrize('family', FAMILIES)
def test_search_respects_cauchy_schwarz_on_many_random_norms(family):
    failures = []
    for trial in range(1000):
        dim = 2 + trial % 2
        seed = derive_seed(7, trial)
        norm = random_norm(family, dim, seed)
        report = max_abs_product(norm, 4, 100, seed, dim=norm.dim or dim)
        if report.best_value > 1 + 1e-7:
            failures.append((seed, dim, report.best_value))
    assert not failures
