"""
Multi-start pattern search over pairs of vectors. Vectors are optimized as raw
real parameters and normalized by the norm inside the objectives; the first
component of every vector is kept real, the remaining components are free.
"""

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, NamedTuple, Optional

import numpy as np
import structlog
from pydantic import BaseModel, Field

if TYPE_CHECKING:
    from structlog.stdlib import (
        BoundLogger,
    )

from polarize.errors import ContractViolationError
from polarize.explorer import configuration
from polarize.general.schema import CVector
from polarize.norms.evaluation import Evaluator, evaluator
from polarize.norms.schema import NormDescriptor
from polarize.product.polarization import (
    phase_homogeneity_defect_at,
    polarization_product,
    product_arrays,
)
from polarize.utils import seed_sequence, thread_count

ArrayObjective = Callable[[np.ndarray], np.ndarray]
Retraction = Callable[[np.ndarray], np.ndarray]

ABS_PRODUCT = 'abs_product'
PHASE_DEFECT = 'phase_defect'
GRID_ABS_PRODUCT = 'grid_abs_product'


class PatternResult(NamedTuple):
    x: np.ndarray
    value: float
    iterations: int
    converged: bool


class SearchReport(BaseModel):
    objective: str
    best_value: float
    witnesses: list[CVector] = Field(
        description='Unit vectors under `norm` at which `best_value` is attained.'
    )
    phase: Optional[float] = None
    norm: NormDescriptor
    dim: int
    seed: Optional[int] = None
    restarts: int
    iterations: int
    converged: bool


def pattern_search(
    objective: ArrayObjective,
    start: np.ndarray,
    *,
    max_iter: int,
    initial_step: Optional[float] = None,
    tol: Optional[float] = None,
    retract: Optional[Retraction] = None,
) -> PatternResult:
    """
    Maximizes `objective` by compass search: each iteration polls the `2P`
    points `x +- step e_i` in one batched call, moves to the best improving
    one and halves the step when none improves. `objective` maps an array of
    shape `(m, P)` to `m` values. `retract` maps accepted points back to a
    preferred representative, for instance by rescaling.
    """
    step = configuration.initial_step if initial_step is None else initial_step
    tol = configuration.convergence_tol if tol is None else tol
    x = np.asarray(start, dtype=float)
    if retract is not None:
        x = retract(x)
    value = float(objective(x[None])[0])
    directions = np.concatenate([np.eye(x.size), -np.eye(x.size)])

    def small_step() -> bool:
        return step <= tol * max(1.0, float(np.max(np.abs(x))))

    iterations = 0
    while iterations < max_iter and not small_step():
        iterations += 1
        candidates = x + step * directions
        values = objective(candidates)
        best = int(np.argmax(values))
        if values[best] > value:
            x = candidates[best]
            if retract is not None:
                x = retract(x)
            value = float(objective(x[None])[0])
        else:
            step /= 2
    return PatternResult(
        x=x, value=value, iterations=iterations, converged=small_step()
    )


def vector_size(dim: int) -> int:
    return 2 * dim - 1


def unpack_vectors(params: np.ndarray, dim: int, count: int) -> list[np.ndarray]:
    """
    Splits parameters into `count` complex vectors. Each vector takes `dim`
    real parts followed by the imaginary parts of its components 2..dim.
    """
    size = vector_size(dim)
    vectors = []
    for k in range(count):
        block = params[..., k * size : (k + 1) * size]
        vector = block[..., :dim].astype(np.complex128)
        vector[..., 1:] += 1j * block[..., dim:]
        vectors.append(vector)
    return vectors


def fix_phase(vector: np.ndarray) -> np.ndarray:
    """Rotates `vector` so that its first non-zero component is real positive."""
    vector = np.asarray(vector, dtype=np.complex128)
    nonzero = np.flatnonzero(np.abs(vector) > 0)
    if nonzero.size == 0:
        return vector
    lead = vector[nonzero[0]]
    return vector * (abs(lead) / lead)


def _unit_rows(
    evaluate: Evaluator, vectors: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    norms = evaluate(vectors)
    valid = norms >= configuration.min_raw_norm
    return vectors / np.where(valid, norms, 1.0)[..., None], valid


def abs_product_objective(evaluate: Evaluator, dim: int) -> ArrayObjective:
    def objective(params: np.ndarray) -> np.ndarray:
        x, y = unpack_vectors(params, dim, 2)
        x_hat, valid_x = _unit_rows(evaluate, x)
        y_hat, valid_y = _unit_rows(evaluate, y)
        values, _, _ = product_arrays(evaluate, x_hat, y_hat)
        return np.where(valid_x & valid_y, np.abs(values), -np.inf)

    return objective


def phase_defect_objective(evaluate: Evaluator, dim: int) -> ArrayObjective:
    def objective(params: np.ndarray) -> np.ndarray:
        x, y = unpack_vectors(params[..., :-1], dim, 2)
        rotation = np.exp(1j * params[..., -1])
        x_hat, valid_x = _unit_rows(evaluate, x)
        y_hat, valid_y = _unit_rows(evaluate, y)
        values, _, _ = product_arrays(
            evaluate,
            np.stack([rotation[..., None] * x_hat, x_hat]),
            np.stack([y_hat, y_hat]),
        )
        defect = np.abs(values[0] - rotation * values[1])
        return np.where(valid_x & valid_y, defect, -np.inf)

    return objective


def _rescaling(evaluate: Evaluator, dim: int, count: int) -> Retraction:
    size = vector_size(dim)

    def retract(params: np.ndarray) -> np.ndarray:
        params = params.copy()
        for k, vector in enumerate(unpack_vectors(params, dim, count)):
            norm = float(evaluate(vector))
            if norm >= configuration.min_raw_norm:
                params[k * size : (k + 1) * size] /= norm
        if params.size > count * size:
            params[-1] = params[-1] % (2 * math.pi)
        return params

    return retract


def resolve_dim(norm: NormDescriptor, dim: Optional[int]) -> int:
    if norm.dim is not None and dim is not None and norm.dim != dim:
        raise ContractViolationError(
            f'The norm acts on C^{norm.dim}, but dim {dim} was requested.'
        )
    return norm.dim or dim or 2


def _check_budget(restarts: int, iters: int) -> None:
    if restarts < 1 or iters < 1:
        raise ContractViolationError('restarts and iters must be at least 1.')


def _multistart(
    objective: ArrayObjective,
    starts: list[np.ndarray],
    iters: int,
    retract: Retraction,
) -> tuple[int, list[PatternResult]]:
    def run(start: np.ndarray) -> PatternResult:
        return pattern_search(objective, start, max_iter=iters, retract=retract)

    with ThreadPoolExecutor(max_workers=min(thread_count(), len(starts))) as executor:
        results = list(executor.map(run, starts))
    # lowest restart index wins ties
    best = max(range(len(results)), key=lambda k: (results[k].value, -k))
    return best, results


def _witness(vector: np.ndarray, evaluate: Evaluator) -> CVector:
    vector = fix_phase(vector)
    return CVector.from_complex(vector / float(evaluate(vector)))


def max_abs_product(
    norm: NormDescriptor,
    restarts: int,
    iters: int,
    seed: int,
    *,
    dim: Optional[int] = None,
    logger: Optional['BoundLogger'] = None,
) -> SearchReport:
    """
    Largest `|<x|y>|` found over unit vectors `x, y`. The first restart
    starts on the diagonal `y = x`, where the product equals 1.
    """
    if logger is None:
        logger = structlog.get_logger(__name__)
    _check_budget(restarts, iters)
    dim = resolve_dim(norm, dim)
    evaluate = evaluator(norm, dim)
    size = vector_size(dim)
    starts = []
    for k, child in enumerate(seed_sequence(seed).spawn(restarts)):
        start = np.random.default_rng(child).normal(size=2 * size)
        if k == 0:
            start[size:] = start[:size]
        starts.append(start)

    best, results = _multistart(
        abs_product_objective(evaluate, dim),
        starts,
        iters,
        _rescaling(evaluate, dim, 2),
    )
    x, y = (
        _witness(vector, evaluate)
        for vector in unpack_vectors(results[best].x, dim, 2)
    )
    report = SearchReport(
        objective=ABS_PRODUCT,
        best_value=abs(polarization_product(norm, x, y).value),
        witnesses=[x, y],
        norm=norm,
        dim=dim,
        seed=seed,
        restarts=restarts,
        iterations=sum(result.iterations for result in results),
        converged=all(result.converged for result in results),
    )
    logger.info(
        'Searched |<x|y>|',
        kind=norm.kind,
        best_value=report.best_value,
        converged=report.converged,
    )
    return report


def max_phase_defect(
    norm: NormDescriptor,
    restarts: int,
    iters: int,
    seed: int,
    *,
    dim: Optional[int] = None,
    logger: Optional['BoundLogger'] = None,
) -> SearchReport:
    """
    Largest `|<e^{i phi} x|y> - e^{i phi} <x|y>|` found over unit vectors and
    phases `phi` in `[0, 2 pi)`.
    """
    if logger is None:
        logger = structlog.get_logger(__name__)
    _check_budget(restarts, iters)
    dim = resolve_dim(norm, dim)
    evaluate = evaluator(norm, dim)
    starts = []
    for child in seed_sequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        vectors = rng.normal(size=2 * vector_size(dim))
        starts.append(np.append(vectors, 2 * math.pi * rng.random()))

    best, results = _multistart(
        phase_defect_objective(evaluate, dim),
        starts,
        iters,
        _rescaling(evaluate, dim, 2),
    )
    params = results[best].x
    x, y = (
        _witness(vector, evaluate) for vector in unpack_vectors(params[:-1], dim, 2)
    )
    phi = float(params[-1] % (2 * math.pi))
    report = SearchReport(
        objective=PHASE_DEFECT,
        best_value=phase_homogeneity_defect_at(norm, x, y, phi),
        witnesses=[x, y],
        phase=phi,
        norm=norm,
        dim=dim,
        seed=seed,
        restarts=restarts,
        iterations=sum(result.iterations for result in results),
        converged=all(result.converged for result in results),
    )
    logger.info(
        'Searched the phase defect',
        kind=norm.kind,
        best_value=report.best_value,
        phase=phi,
    )
    return report


def grid_max_abs_product(norm: NormDescriptor, resolution: int = 10) -> SearchReport:
    """
    Brute force `|<x|y>|` on C^2 over `resolution^6` raw parameter points:
    `x_1` in `[0, 1]`, the real parts of `y_1` and both parts of `x_2, y_2`
    in `[-1, 1]`. Points with a raw norm below `min_raw_norm` are skipped.
    """
    dim = resolve_dim(norm, 2)
    if dim != 2:
        raise ContractViolationError('The grid search covers norms on C^2 only.')
    if resolution < 2:
        raise ContractViolationError('resolution must be at least 2.')
    evaluate = evaluator(norm, dim)
    objective = abs_product_objective(evaluate, dim)
    axis = np.linspace(-1.0, 1.0, resolution)
    # parameter layout: x_1, re x_2, im x_2, y_1, re y_2, im y_2
    rest = np.stack(np.meshgrid(axis, axis, axis, axis, axis, indexing='ij'), -1)
    rest = rest.reshape(-1, 5)
    best_value, best_params = -np.inf, None
    for first in np.linspace(0.0, 1.0, resolution):
        params = np.column_stack([np.full(len(rest), first), rest])
        values = objective(params)
        index = int(np.argmax(values))
        if values[index] > best_value:
            best_value, best_params = float(values[index]), params[index]
    x, y = (
        _witness(vector, evaluate) for vector in unpack_vectors(best_params, dim, 2)
    )
    return SearchReport(
        objective=GRID_ABS_PRODUCT,
        best_value=abs(polarization_product(norm, x, y).value),
        witnesses=[x, y],
        norm=norm,
        dim=dim,
        restarts=1,
        iterations=resolution**6,
        converged=True,
    )
