from collections.abc import Sequence
from typing import TYPE_CHECKING, Optional, Union

import numpy as np
import structlog
from pydantic import BaseModel, Field, computed_field

if TYPE_CHECKING:
    from structlog.stdlib import (
        BoundLogger,
    )

from polarize.errors import ContractViolationError
from polarize.explorer import configuration
from polarize.explorer.search import max_phase_defect, resolve_dim
from polarize.norms.evaluation import evaluator
from polarize.norms.generation import FAMILIES, NormFamily, random_norm
from polarize.norms.schema import NormDescriptor
from polarize.utils import derive_seed, make_rng

PHASE_HOMOGENEOUS_NOT_INNER_PRODUCT = 'phase_homogeneous_not_inner_product'
INNER_PRODUCT_NOT_PHASE_HOMOGENEOUS = 'inner_product_not_phase_homogeneous'


def parallelogram_defect(
    norm: NormDescriptor, n_samples: int, seed: int, *, dim: Optional[int] = None
) -> float:
    """
    Largest relative violation of the parallelogram law,
    `|(||x+y||^2 + ||x-y||^2 - 2||x||^2 - 2||y||^2)| / (||x||^2 + ||y||^2)`,
    over `n_samples` random pairs and the pair of the first two basis vectors.
    """
    if n_samples < 1:
        raise ContractViolationError('n_samples must be at least 1.')
    dim = resolve_dim(norm, dim)
    evaluate = evaluator(norm, dim)
    rng = make_rng(seed, dim)
    shape = (n_samples, dim)
    x = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    y = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    basis = np.eye(dim, dtype=np.complex128)
    x = np.concatenate([basis[:1], x])
    y = np.concatenate([basis[1:2] if dim > 1 else basis[:1], y])

    squares = evaluate(np.stack([x + y, x - y, x, y])) ** 2
    defect = np.abs(squares[0] + squares[1] - 2 * squares[2] - 2 * squares[3])
    return float(np.max(defect / (squares[2] + squares[3])))


class ConjectureEntry(BaseModel):
    family: NormFamily
    seed: int
    norm: NormDescriptor
    parallelogram_defect: float
    phase_defect: float
    flag: Optional[str] = None


class ConjectureReport(BaseModel):
    """
    Evidence on whether phase homogeneity of the product characterizes the
    norms that come from an inner product. Flags are findings, not failures.
    """

    seed: int
    trials: int
    dim: int
    families: list[NormFamily]
    entries: list[ConjectureEntry] = Field(default_factory=list)

    @computed_field
    @property
    def flags(self) -> list[ConjectureEntry]:
        return [entry for entry in self.entries if entry.flag is not None]


def classify(parallelogram: float, phase: float) -> Optional[str]:
    small, large = configuration.phase_flag_tol, configuration.parallelogram_flag_tol
    if phase <= small and parallelogram >= large:
        return PHASE_HOMOGENEOUS_NOT_INNER_PRODUCT
    if parallelogram <= small and phase >= large:
        return INNER_PRODUCT_NOT_PHASE_HOMOGENEOUS
    return None


def explore_conjecture(
    families: Sequence[Union[NormFamily, str]],
    trials: int,
    seed: int,
    *,
    dim: int = 2,
    restarts: int = 8,
    iters: int = 200,
    n_samples: int = 200,
    logger: Optional['BoundLogger'] = None,
) -> ConjectureReport:
    """
    Samples `trials` norms, cycling through `families`, and records for each
    the parallelogram defect and the largest phase defect found.
    """
    if logger is None:
        logger = structlog.get_logger(__name__)
    if trials < 1:
        raise ContractViolationError('trials must be at least 1.')
    families = [NormFamily(family) for family in families] or list(FAMILIES)
    report = ConjectureReport(seed=seed, trials=trials, dim=dim, families=families)
    for trial in range(trials):
        family = families[trial % len(families)]
        trial_seed = derive_seed(seed, trial)
        norm = random_norm(family, dim, trial_seed, logger=logger)
        # induced_c2 norms live on C^2 whatever dim was asked for
        norm_dim = norm.dim or dim
        parallelogram = parallelogram_defect(norm, n_samples, trial_seed, dim=norm_dim)
        phase = max_phase_defect(
            norm, restarts, iters, trial_seed, dim=norm_dim, logger=logger
        ).best_value
        entry = ConjectureEntry(
            family=family,
            seed=trial_seed,
            norm=norm,
            parallelogram_defect=parallelogram,
            phase_defect=phase,
            flag=classify(parallelogram, phase),
        )
        if entry.flag is not None:
            logger.warning(
                'Conjecture flag',
                flag=entry.flag,
                family=family.value,
                seed=trial_seed,
                parallelogram_defect=parallelogram,
                phase_defect=phase,
            )
        report.entries.append(entry)
    return report
