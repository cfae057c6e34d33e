import math
from collections.abc import Iterable
from typing import Annotated, Any, Optional

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    RootModel,
    computed_field,
    field_validator,
)

ComplexPair = tuple[float, float]


def complex_to_pair(value: complex) -> ComplexPair:
    value = complex(value)
    return (float(value.real), float(value.imag))


def pair_to_complex(pair: ComplexPair) -> complex:
    return complex(pair[0], pair[1])


def _as_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (complex, float, int, np.number)) and not isinstance(
        value, bool
    ):
        return complex(value)
    raise ValueError('expected a complex number or an [re, im] pair')


ComplexScalar = Annotated[
    Any,
    BeforeValidator(_as_complex),
    PlainSerializer(lambda z: list(complex_to_pair(z)), return_type=list[float]),
]


class CVector(RootModel[tuple[ComplexPair, ...]]):
    """
    A vector of C^n, stored as (re, im) pairs so that its JSON form is
    `[[re, im], ...]`.
    """

    model_config = ConfigDict(frozen=True)

    @field_validator('root')
    @classmethod
    def _finite_and_nonempty(cls, value):
        if not value:
            raise ValueError('a vector needs at least one component')
        for re, im in value:
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValueError('vector components must be finite')
        return value

    @classmethod
    def from_complex(cls, values: Iterable[complex]) -> 'CVector':
        array = np.asarray(values, dtype=np.complex128).ravel()
        return cls(tuple(complex_to_pair(z) for z in array))

    @classmethod
    def basis(cls, dim: int, index: int) -> 'CVector':
        array = np.zeros(dim, dtype=np.complex128)
        array[index] = 1.0
        return cls.from_complex(array)

    @property
    def dim(self) -> int:
        return len(self.root)

    @property
    def array(self) -> np.ndarray:
        return np.array([complex(re, im) for re, im in self.root], dtype=np.complex128)

    def __len__(self) -> int:
        return len(self.root)


class Check(BaseModel):
    """
    One inequality `lhs <= rhs`. `margin` is the slack `rhs - lhs`; the check
    passes when the slack is not more negative than `tolerance`.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float = 0.0
    passed: bool

    @classmethod
    def upper(cls, name: str, lhs: float, rhs: float, tolerance: float) -> 'Check':
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs
        return cls(
            name=name,
            lhs=lhs,
            rhs=rhs,
            margin=margin,
            tolerance=float(tolerance),
            passed=bool(margin >= -tolerance),
        )

    @classmethod
    def lower(cls, name: str, lhs: float, rhs: float, tolerance: float) -> 'Check':
        """`lhs >= rhs`, stored with the sides swapped."""
        return cls.upper(name, rhs, lhs, tolerance)

    @classmethod
    def residual(cls, name: str, residual: float, tolerance: float) -> 'Check':
        return cls.upper(name, abs(residual), 0.0, tolerance)

    @property
    def excess(self) -> float:
        return -self.margin


class CheckReport(BaseModel):
    checks: list[Check] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def worst(self) -> Optional[Check]:
        if not self.checks:
            return None
        return min(self.checks, key=lambda check: check.margin + check.tolerance)

    def check(self, name: str) -> Check:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)
