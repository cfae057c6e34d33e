from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator

from polarize.errors import ContractViolationError, DependentVectorsError
from polarize.general.schema import CVector
from polarize.norms.evaluation import eval_norm, norm_values
from polarize.norms.schema import InducedOnC2, NormDescriptor, independence_residual

# (1, 1), (1, -1), (1, i), (1, -i)
STVW_VECTORS = np.array([[1, 1], [1, -1], [1, 1j], [1, -1j]], dtype=np.complex128)

FIRST = CVector.basis(2, 0)
SECOND = CVector.basis(2, 1)


class OrientationOp(str, Enum):
    NEGATE_FIRST = 'negate_first'
    SWAP_ARGUMENTS = 'swap_arguments'


class StvwQuadruple(BaseModel):
    """
    `1/s, 1/t, 1/v, 1/w` are the norms of `(1, 1), (1, -1), (1, i), (1, -i)`.
    Serialized as `[s, t, v, w]`.
    """

    model_config = ConfigDict(frozen=True)

    s: float = Field(gt=0)
    t: float = Field(gt=0)
    v: float = Field(gt=0)
    w: float = Field(gt=0)

    @model_validator(mode='before')
    @classmethod
    def _from_sequence(cls, data: Any) -> Any:
        if isinstance(data, (list, tuple)):
            if len(data) != 4:
                raise ValueError('expected [s, t, v, w]')
            return dict(zip('stvw', data))
        return data

    @model_serializer
    def _as_list(self) -> list[float]:
        return [self.s, self.t, self.v, self.w]

    @classmethod
    def from_norms(cls, norms) -> 'StvwQuadruple':
        s, t, v, w = (1.0 / float(norm) for norm in norms)
        return cls(s=s, t=t, v=v, w=w)

    @property
    def inverses(self) -> tuple[float, float, float, float]:
        return (1 / self.s, 1 / self.t, 1 / self.v, 1 / self.w)


def require_c2(descriptor: NormDescriptor) -> None:
    if descriptor.dim not in (2, None):
        raise ContractViolationError(
            f'Expected a norm on C^2, got a norm on C^{descriptor.dim}.'
        )


def induce_c2_norm(
    base: NormDescriptor, a: CVector, b: CVector, *, normalize: bool = True
) -> InducedOnC2:
    """
    The norm `(alpha, beta) -> ||alpha a + beta b||` on C^2. With `normalize`
    the spanning vectors are scaled to unit length first, so that `(1, 0)` and
    `(0, 1)` are unit vectors of the induced norm.
    """
    if a.dim != b.dim:
        raise ContractViolationError(
            f'a and b have different dimensions {a.dim} and {b.dim}.'
        )
    if base.dim is not None and base.dim != a.dim:
        raise ContractViolationError(
            f'The base norm acts on C^{base.dim}, got vectors of C^{a.dim}.'
        )
    if independence_residual(a.array, b.array) <= 1e-9 * float(
        np.linalg.norm(b.array)
    ):
        raise DependentVectorsError('a and b are linearly dependent.')
    if normalize:
        a = CVector.from_complex(a.array / eval_norm(base, a))
        b = CVector.from_complex(b.array / eval_norm(base, b))
    return InducedOnC2(base=base, a=a, b=b)


def compute_stvw(c2: NormDescriptor) -> StvwQuadruple:
    require_c2(c2)
    return StvwQuadruple.from_norms(norm_values(c2, STVW_VECTORS))


def product_from_stvw(q: StvwQuadruple) -> complex:
    inv_s, inv_t, inv_v, inv_w = q.inverses
    return 0.25 * complex(inv_s**2 - inv_t**2, inv_v**2 - inv_w**2)


def canonical_orientation(
    c2: NormDescriptor,
) -> tuple[NormDescriptor, list[OrientationOp]]:
    """
    Rewrites `c2` so that `s <= t` and `v <= w`. Negating the first basis
    vector exchanges `s, t` and `v, w` (the product changes sign); swapping
    the arguments exchanges `v, w` only (the product is conjugated).
    """
    require_c2(c2)
    ops: list[OrientationOp] = []
    q = compute_stvw(c2)
    if q.s > q.t:
        c2 = InducedOnC2(base=c2, a=CVector.from_complex([-1, 0]), b=SECOND)
        ops.append(OrientationOp.NEGATE_FIRST)
        q = compute_stvw(c2)
    if q.v > q.w:
        c2 = InducedOnC2(base=c2, a=SECOND, b=FIRST)
        ops.append(OrientationOp.SWAP_ARGUMENTS)
    return c2, ops
