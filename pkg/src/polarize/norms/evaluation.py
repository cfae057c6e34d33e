import math
from collections.abc import Callable
from functools import lru_cache
from typing import TYPE_CHECKING, Optional

import numpy as np
import structlog
from pydantic import Field

if TYPE_CHECKING:
    from structlog.stdlib import (
        BoundLogger,
    )

from polarize.errors import ContractViolationError, InvalidDescriptorError
from polarize.general.schema import Check, CheckReport, CVector
from polarize.norms import configuration
from polarize.norms.schema import (
    DualMax,
    HermitianQuadratic,
    InducedOnC2,
    MaxOf,
    Mixture,
    NormDescriptor,
    PNorm,
    WeightedPNorm,
    descriptor_issues,
    dump_descriptor,
)
from polarize.utils import make_rng

Evaluator = Callable[[np.ndarray], np.ndarray]


def _p_norm(p: float) -> Evaluator:
    if math.isinf(p):
        return lambda arr: np.abs(arr).max(axis=-1)
    if p == 1:
        return lambda arr: np.abs(arr).sum(axis=-1)

    def evaluate(arr: np.ndarray) -> np.ndarray:
        moduli = np.abs(arr)
        scale = moduli.max(axis=-1)
        safe = np.where(scale > 0, scale, 1.0)
        ratios = moduli / safe[..., None]
        return scale * (ratios**p).sum(axis=-1) ** (1.0 / p)

    return evaluate


def _hermitian(matrix: np.ndarray) -> Evaluator:
    def evaluate(arr: np.ndarray) -> np.ndarray:
        scale = np.abs(arr).max(axis=-1)
        safe = np.where(scale > 0, scale, 1.0)
        scaled = arr / safe[..., None]
        form = np.einsum('...i,ij,...j->...', scaled.conj(), matrix, scaled).real
        return scale * np.sqrt(np.maximum(form, 0.0))

    return evaluate


@lru_cache(maxsize=512)
def compile_norm(descriptor: NormDescriptor) -> Evaluator:
    """
    Turns a descriptor into a function mapping an array of shape `(..., n)`
    to the norms of its rows. No validity checks happen here.
    """
    if isinstance(descriptor, PNorm):
        return _p_norm(descriptor.p)
    if isinstance(descriptor, WeightedPNorm):
        weights = np.array(descriptor.weights)
        inner = _p_norm(descriptor.p)
        return lambda arr: inner(arr * weights)
    if isinstance(descriptor, HermitianQuadratic):
        return _hermitian(descriptor.array)
    if isinstance(descriptor, DualMax):
        pairing = descriptor.array.conj().T
        return lambda arr: np.abs(arr @ pairing).max(axis=-1)
    if isinstance(descriptor, Mixture):
        terms = [
            (coefficient, compile_norm(part))
            for coefficient, part in zip(descriptor.coefficients, descriptor.parts)
            if coefficient > 0
        ]
        return lambda arr: sum(c * part(arr) for c, part in terms)
    if isinstance(descriptor, MaxOf):
        parts = [compile_norm(part) for part in descriptor.parts]
        return lambda arr: np.maximum.reduce([part(arr) for part in parts])
    if isinstance(descriptor, InducedOnC2):
        base = compile_norm(descriptor.base)
        return lambda arr: base(descriptor.embed(arr))
    raise InvalidDescriptorError(f'Unknown norm descriptor {descriptor!r}')


def evaluator(descriptor: NormDescriptor, dim: Optional[int] = None) -> Evaluator:
    """
    `compile_norm` behind the descriptor and dimension contracts of
    `eval_norm`.
    """
    issues = descriptor_issues(descriptor)
    if issues:
        raise InvalidDescriptorError(
            f'Invalid norm descriptor: {"; ".join(issues)}', list(issues)
        )
    if dim is not None and descriptor.dim is not None and descriptor.dim != dim:
        raise ContractViolationError(
            f'The norm acts on C^{descriptor.dim}, got a vector of C^{dim}.'
        )
    return compile_norm(descriptor)


def norm_values(descriptor: NormDescriptor, arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim == 0 or arr.shape[-1] == 0:
        raise ContractViolationError('Vectors need at least one component.')
    if not np.isfinite(arr).all():
        raise ContractViolationError('Vector components must be finite.')
    return evaluator(descriptor, arr.shape[-1])(arr)


def eval_norm(descriptor: NormDescriptor, x: CVector) -> float:
    return float(norm_values(descriptor, x.array))


def kernel_probes(descriptor: NormDescriptor, dim: int) -> np.ndarray:
    """
    Unit directions (Euclidean) where a degenerate descriptor would vanish,
    followed by the standard basis.
    """
    probes: list[np.ndarray] = []
    if isinstance(descriptor, WeightedPNorm):
        probe = np.zeros(dim, dtype=np.complex128)
        probe[int(np.argmin(descriptor.weights))] = 1.0
        probes.append(probe)
    elif isinstance(descriptor, HermitianQuadratic):
        _, vectors = np.linalg.eigh(descriptor.array)
        probes.append(vectors[:, 0])
    elif isinstance(descriptor, DualMax):
        # rows of vh with small singular values span the common kernel
        _, singular, vh = np.linalg.svd(descriptor.array.conj())
        tol = 1e-12 * singular[0]
        probes.append(vh[-1].conj())
        probes.extend(vh[k].conj() for k in range(len(singular)) if singular[k] <= tol)
    elif isinstance(descriptor, (Mixture, MaxOf)):
        for part in descriptor.parts:
            probes.extend(kernel_probes(part, dim)[:-dim])
    elif isinstance(descriptor, InducedOnC2):
        span = np.stack([descriptor.a.array, descriptor.b.array], axis=1)
        for probe in kernel_probes(descriptor.base, descriptor.a.dim):
            coordinates, *_ = np.linalg.lstsq(span, probe, rcond=None)
            probes.append(coordinates)
    probes.extend(np.eye(dim, dtype=np.complex128))
    stacked = np.array(probes, dtype=np.complex128).reshape(-1, dim)
    lengths = np.linalg.norm(stacked, axis=-1)
    keep = lengths > 0
    return stacked[keep] / lengths[keep, None]


class NormValidationReport(CheckReport):
    descriptor: dict
    dim: int
    n_samples: int
    seed: int
    issues: list[str] = Field(default_factory=list)


def _random_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    radii = np.exp(rng.normal(size=(count, 1)))
    return radii * (rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim)))


def validate_norm(
    descriptor: NormDescriptor,
    n_samples: int,
    seed: int,
    *,
    dim: Optional[int] = None,
    logger: Optional['BoundLogger'] = None,
) -> NormValidationReport:
    """
    Samples the norm axioms. Every check stores the worst relative violation
    found as `lhs` against `rhs = 0`; definiteness stores the smallest ratio
    `||x|| / ||x||_2` against `definiteness_floor`. An invalid descriptor is
    reported, never raised.
    """
    if logger is None:
        logger = structlog.get_logger(__name__)
    if n_samples < 1:
        raise ContractViolationError('n_samples must be at least 1.')
    dim = descriptor.dim or dim or 2
    issues = list(descriptor_issues(descriptor))
    norm = compile_norm(descriptor)
    rng = make_rng(seed, dim)
    tol = configuration.axiom_tol

    x = _random_vectors(rng, n_samples, dim)
    y = _random_vectors(rng, n_samples, dim)
    z = np.exp(2 * rng.normal(size=n_samples)) * np.exp(
        2j * np.pi * rng.random(size=n_samples)
    )
    norm_x, norm_y = norm(x), norm(y)

    homogeneity = np.abs(norm(z[:, None] * x) - np.abs(z) * norm_x) / (
        1 + np.abs(z) * norm_x
    )
    triangle = (norm(x + y) - norm_x - norm_y) / np.maximum(norm_x + norm_y, 1e-300)
    probes = np.concatenate([kernel_probes(descriptor, dim), x])
    ratios = norm(probes) / np.linalg.norm(probes, axis=-1)
    zero = float(norm(np.zeros((1, dim), dtype=np.complex128))[0])

    checks = [
        Check.upper('descriptor', len(issues), 0, 0),
        Check.upper('homogeneity', np.max(homogeneity), 0, tol),
        Check.upper('triangle', max(float(np.max(triangle)), 0.0), 0, tol),
        Check.lower(
            'definiteness', np.min(ratios), configuration.definiteness_floor, 0
        ),
        Check.residual('zero_vector', zero, 0),
    ]
    report = NormValidationReport(
        descriptor=dump_descriptor(descriptor),
        dim=dim,
        n_samples=n_samples,
        seed=seed,
        issues=issues,
        checks=checks,
    )
    if not report.passed:
        logger.error(
            'Norm validation failed',
            kind=descriptor.kind,
            failed=[check.name for check in report.failures()],
            issues=issues,
        )
    return report
