import math
from functools import lru_cache
from typing import Annotated, Any, Literal, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    TypeAdapter,
    ValidationError,
    model_validator,
)

from polarize.errors import InvalidDescriptorError
from polarize.general.schema import CVector
from polarize.norms import configuration


def _parse_exponent(value: Any) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ('inf', 'infinity', '+inf'):
            return math.inf
        raise ValueError('p must be a number >= 1 or the string "inf"')
    if isinstance(value, bool):
        raise ValueError('p must be a number >= 1 or the string "inf"')
    value = float(value)
    if math.isnan(value) or value < 1:
        raise ValueError('p must be a number >= 1 or the string "inf"')
    return value


def _dump_exponent(value: float) -> Union[float, str]:
    return 'inf' if math.isinf(value) else value


PExponent = Annotated[
    float,
    BeforeValidator(_parse_exponent),
    PlainSerializer(_dump_exponent, return_type=Union[float, str]),
]
PositiveWeight = Annotated[float, Field(gt=0, allow_inf_nan=False)]
Coefficient = Annotated[float, Field(ge=0, allow_inf_nan=False)]


def _common_dim(dims: list[Optional[int]]) -> Optional[int]:
    known = {dim for dim in dims if dim is not None}
    if len(known) > 1:
        raise ValueError(f'parts have different dimensions {sorted(known)}')
    return known.pop() if known else None


class _Descriptor(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')


class PNorm(_Descriptor):
    """
    `(sum |x_k|^p)^(1/p)`, or `max |x_k|` for `p = inf`. Without `dim` the
    descriptor applies to every dimension.
    """

    kind: Literal['pnorm'] = 'pnorm'
    p: PExponent
    dim: Optional[int] = Field(None, ge=1)


class WeightedPNorm(_Descriptor):
    """
    The p-norm of `(w_1 x_1, ..., w_n x_n)`.
    """

    kind: Literal['weighted_pnorm'] = 'weighted_pnorm'
    p: PExponent
    weights: tuple[PositiveWeight, ...] = Field(min_length=1)

    @property
    def dim(self) -> int:
        return len(self.weights)


class HermitianQuadratic(_Descriptor):
    """
    `sqrt(x^H A x)` for a Hermitian positive definite `A`, given by its rows.
    """

    kind: Literal['hermitian'] = 'hermitian'
    matrix: tuple[CVector, ...] = Field(min_length=1)

    @model_validator(mode='after')
    def _square(self):
        if any(row.dim != len(self.matrix) for row in self.matrix):
            raise ValueError('the matrix must be square')
        return self

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def array(self) -> np.ndarray:
        return np.array([row.array for row in self.matrix])


class DualMax(_Descriptor):
    """
    `max_k |<f_k, x>|` with the Hermitian pairing `sum conj(f_k) x`.
    """

    kind: Literal['dual_max'] = 'dual_max'
    functionals: tuple[CVector, ...] = Field(min_length=1)

    @model_validator(mode='after')
    def _shape(self):
        dims = {functional.dim for functional in self.functionals}
        if len(dims) > 1:
            raise ValueError('all functionals must have the same dimension')
        if len(self.functionals) < self.dim:
            raise ValueError(
                f'{self.dim} functionals are needed to span C^{self.dim}, '
                f'got {len(self.functionals)}'
            )
        return self

    @property
    def dim(self) -> int:
        return self.functionals[0].dim

    @property
    def array(self) -> np.ndarray:
        return np.array([functional.array for functional in self.functionals])


class Mixture(_Descriptor):
    kind: Literal['mixture'] = 'mixture'
    parts: tuple['NormDescriptor', ...] = Field(min_length=1)
    coefficients: tuple[Coefficient, ...]

    @model_validator(mode='after')
    def _coefficients(self):
        if len(self.coefficients) != len(self.parts):
            raise ValueError('one coefficient per part is required')
        if not any(c > 0 for c in self.coefficients):
            raise ValueError('at least one coefficient must be positive')
        _common_dim([part.dim for part in self.parts])
        return self

    @property
    def dim(self) -> Optional[int]:
        return _common_dim([part.dim for part in self.parts])


class MaxOf(_Descriptor):
    kind: Literal['max_of'] = 'max_of'
    parts: tuple['NormDescriptor', ...] = Field(min_length=1)

    @model_validator(mode='after')
    def _dims(self):
        _common_dim([part.dim for part in self.parts])
        return self

    @property
    def dim(self) -> Optional[int]:
        return _common_dim([part.dim for part in self.parts])


class InducedOnC2(_Descriptor):
    """
    The norm `(alpha, beta) -> ||alpha a + beta b||` that `base` induces on
    the plane spanned by `a` and `b`.
    """

    kind: Literal['induced_c2'] = 'induced_c2'
    base: 'NormDescriptor'
    a: CVector
    b: CVector

    @model_validator(mode='after')
    def _dims(self):
        if self.a.dim != self.b.dim:
            raise ValueError('a and b must have the same dimension')
        if self.base.dim is not None and self.base.dim != self.a.dim:
            raise ValueError(
                f'a and b live in C^{self.a.dim} but the base norm acts on '
                f'C^{self.base.dim}'
            )
        return self

    @property
    def dim(self) -> int:
        return 2

    def embed(self, coordinates: np.ndarray) -> np.ndarray:
        coordinates = np.asarray(coordinates, dtype=np.complex128)
        return (
            coordinates[..., 0:1] * self.a.array + coordinates[..., 1:2] * self.b.array
        )


NormDescriptor = Annotated[
    Union[
        PNorm,
        WeightedPNorm,
        HermitianQuadratic,
        DualMax,
        Mixture,
        MaxOf,
        InducedOnC2,
    ],
    Field(discriminator='kind'),
]

Mixture.model_rebuild()
MaxOf.model_rebuild()
InducedOnC2.model_rebuild()

_adapter = TypeAdapter(NormDescriptor)

DESCRIPTOR_TYPES = (
    PNorm,
    WeightedPNorm,
    HermitianQuadratic,
    DualMax,
    Mixture,
    MaxOf,
    InducedOnC2,
)


def parse_descriptor(data: Union[str, bytes, dict, BaseModel]) -> NormDescriptor:
    """
    Builds a descriptor from its JSON text or its decoded dictionary.
    Structural problems raise `InvalidDescriptorError` with one entry per
    pydantic error.
    """
    if isinstance(data, DESCRIPTOR_TYPES):
        return data
    try:
        if isinstance(data, (str, bytes)):
            return _adapter.validate_json(data)
        return _adapter.validate_python(data)
    except ValidationError as exc:
        issues = [
            f'{".".join(str(part) for part in error["loc"]) or "descriptor"}: '
            f'{error["msg"]}'
            for error in exc.errors()
        ]
        raise InvalidDescriptorError(
            f'Invalid norm descriptor: {"; ".join(issues)}', issues
        ) from exc


def dump_descriptor(descriptor: NormDescriptor) -> dict:
    return _adapter.dump_python(descriptor, mode='json', exclude_none=True)


def descriptor_to_json(descriptor: NormDescriptor) -> str:
    return _adapter.dump_json(descriptor, exclude_none=True).decode()


@lru_cache(maxsize=1024)
def descriptor_issues(descriptor: NormDescriptor) -> tuple[str, ...]:
    """
    Numerical invariants the model validators cannot express: a positive
    definite Hermitian matrix, spanning functionals, independent `a` and `b`.
    """
    issues: list[str] = []
    if isinstance(descriptor, HermitianQuadratic):
        matrix = descriptor.array
        scale = max(1.0, float(np.abs(matrix).max()))
        if np.abs(matrix - matrix.conj().T).max() > 1e-12 * scale:
            issues.append('hermitian: the matrix is not Hermitian')
        else:
            eigenvalues = np.linalg.eigvalsh(matrix)
            if eigenvalues[0] <= configuration.definiteness_floor**2 * max(
                abs(eigenvalues[-1]), 1e-300
            ):
                issues.append('hermitian: the matrix is not positive definite')
    elif isinstance(descriptor, DualMax):
        singular = np.linalg.svd(descriptor.array, compute_uv=False)
        if singular[-1] <= configuration.definiteness_floor * singular[0]:
            issues.append(f'dual_max: the functionals do not span C^{descriptor.dim}')
    elif isinstance(descriptor, (Mixture, MaxOf)):
        for index, part in enumerate(descriptor.parts):
            issues.extend(
                f'{descriptor.kind}.parts[{index}] {issue}'
                for issue in descriptor_issues(part)
            )
    elif isinstance(descriptor, InducedOnC2):
        issues.extend(
            f'induced_c2.base {issue}' for issue in descriptor_issues(descriptor.base)
        )
        a, b = descriptor.a.array, descriptor.b.array
        if independence_residual(a, b) <= 1e-9 * float(np.linalg.norm(b)):
            issues.append('induced_c2: a and b are linearly dependent')
    return tuple(issues)


def independence_residual(a: np.ndarray, b: np.ndarray) -> float:
    """
    Euclidean norm of `b` after projecting out `a`.
    """
    norm_a = float(np.vdot(a, a).real)
    if norm_a == 0:
        return 0.0
    residual = b - (np.vdot(a, b) / norm_a) * a
    return float(np.linalg.norm(residual))
