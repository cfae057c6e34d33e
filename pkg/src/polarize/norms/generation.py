from enum import Enum
from typing import TYPE_CHECKING, Optional, Union

import numpy as np
import structlog

if TYPE_CHECKING:
    from structlog.stdlib import (
        BoundLogger,
    )

from polarize.errors import (
    ContractViolationError,
    DependentVectorsError,
    GenerationError,
)
from polarize.general.schema import CVector
from polarize.norms import configuration
from polarize.norms.evaluation import validate_norm
from polarize.norms.schema import (
    DualMax,
    HermitianQuadratic,
    MaxOf,
    Mixture,
    NormDescriptor,
    PNorm,
    WeightedPNorm,
    descriptor_issues,
)
from polarize.utils import make_rng


class NormFamily(str, Enum):
    PNORM = 'pnorm'
    WEIGHTED_PNORM = 'weighted_pnorm'
    HERMITIAN = 'hermitian'
    DUAL_MAX = 'dual_max'
    MIXTURE = 'mixture'
    MAX_OF = 'max_of'
    INDUCED_C2 = 'induced_c2'


FAMILIES = tuple(NormFamily)
BASE_FAMILIES = (
    NormFamily.PNORM,
    NormFamily.WEIGHTED_PNORM,
    NormFamily.HERMITIAN,
    NormFamily.DUAL_MAX,
)


def _complex_normal(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def _exponent(rng: np.random.Generator) -> float:
    draw = rng.random()
    if draw < 0.15:
        return float('inf')
    if draw < 0.25:
        return 1.0
    if draw < 0.35:
        return 2.0
    return 1.0 + float(rng.exponential(1.5))


def _pnorm(rng, dim):
    return PNorm(p=_exponent(rng), dim=dim)


def _weighted_pnorm(rng, dim):
    return WeightedPNorm(
        p=_exponent(rng),
        weights=tuple(float(w) for w in rng.lognormal(0.0, 0.5, size=dim)),
    )


def _hermitian(rng, dim):
    b = _complex_normal(rng, dim, dim)
    matrix = b.conj().T @ b + configuration.hermitian_shift * np.eye(dim)
    matrix = (matrix + matrix.conj().T) / 2
    return HermitianQuadratic(matrix=tuple(CVector.from_complex(row) for row in matrix))


def _dual_max(rng, dim):
    count = int(rng.integers(dim, 3 * dim + 1))
    functionals = _complex_normal(rng, count, dim)
    singular = np.linalg.svd(functionals, compute_uv=False)
    if singular[-1] <= 1e-3 * singular[0]:
        return None
    return DualMax(functionals=tuple(CVector.from_complex(f) for f in functionals))


def _mixture(rng, dim):
    dual = _dual_max(rng, dim)
    if dual is None:
        return None
    coefficients = rng.dirichlet(np.ones(2))
    return Mixture(
        parts=(_pnorm(rng, dim), dual),
        coefficients=tuple(float(c) for c in coefficients),
    )


def _max_of(rng, dim):
    return MaxOf(parts=(_weighted_pnorm(rng, dim), _hermitian(rng, dim)))


def _induced_c2(rng, dim):
    from polarize.csb.reduction import induce_c2_norm

    base_dim = max(dim, 2)
    family = BASE_FAMILIES[int(rng.integers(len(BASE_FAMILIES)))]
    base = _SAMPLERS[family](rng, base_dim)
    if base is None:
        return None
    a, b = (CVector.from_complex(_complex_normal(rng, base_dim)) for _ in range(2))
    try:
        return induce_c2_norm(base, a, b)
    except DependentVectorsError:
        return None


_SAMPLERS = {
    NormFamily.PNORM: _pnorm,
    NormFamily.WEIGHTED_PNORM: _weighted_pnorm,
    NormFamily.HERMITIAN: _hermitian,
    NormFamily.DUAL_MAX: _dual_max,
    NormFamily.MIXTURE: _mixture,
    NormFamily.MAX_OF: _max_of,
    NormFamily.INDUCED_C2: _induced_c2,
}


def _accepted(
    descriptor: Optional[NormDescriptor], dim: int, seed: int, logger: 'BoundLogger'
) -> bool:
    if descriptor is None or descriptor_issues(descriptor):
        return False
    report = validate_norm(
        descriptor, configuration.validation_samples, seed, dim=dim, logger=logger
    )
    return report.passed


def random_norm(
    family: Union[NormFamily, str],
    dim: int,
    seed: int,
    logger: Optional['BoundLogger'] = None,
) -> NormDescriptor:
    """
    A random descriptor of the given family, a pure function of
    `(family, dim, seed)`. Candidates are resampled until they pass
    `validate_norm`. The `induced_c2` family always returns a norm on C^2,
    induced from a base norm on C^max(dim, 2).
    """
    if logger is None:
        logger = structlog.get_logger(__name__)
    try:
        family = NormFamily(family)
    except ValueError as exc:
        raise ContractViolationError(f'Unknown norm family "{family}".') from exc
    if dim < 1:
        raise ContractViolationError('dim must be at least 1.')
    family_index = FAMILIES.index(family)
    for attempt in range(configuration.max_retries):
        rng = make_rng(seed, family_index, dim, attempt)
        descriptor = _SAMPLERS[family](rng, dim)
        if _accepted(descriptor, dim, seed, logger):
            return descriptor
        logger.debug(
            'Resampling random norm', family=family.value, dim=dim, attempt=attempt
        )
    raise GenerationError(
        f'No valid {family.value} norm on C^{dim} after '
        f'{configuration.max_retries} attempts (seed {seed}).'
    )
