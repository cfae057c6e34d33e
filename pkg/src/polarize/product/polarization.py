import numpy as np
from pydantic import BaseModel, ConfigDict

from polarize.errors import ContractViolationError
from polarize.general import configuration as general_configuration
from polarize.general.schema import ComplexScalar, CVector
from polarize.norms.evaluation import Evaluator, evaluator
from polarize.norms.schema import HermitianQuadratic, NormDescriptor


class ProductValue(BaseModel):
    """
    `<x|y>` together with the norms it was computed from.
    """

    model_config = ConfigDict(frozen=True)

    value: ComplexScalar
    norm_x: float
    norm_y: float

    @property
    def csb_ratio(self) -> float:
        denominator = self.norm_x * self.norm_y
        if denominator == 0:
            return 0.0
        return abs(self.value) / denominator


def _combine(norms: np.ndarray) -> np.ndarray:
    squares = norms**2
    return 0.25 * ((squares[0] - squares[1]) + 1j * (squares[2] - squares[3]))


def product_arrays(
    evaluate: Evaluator, xs: np.ndarray, ys: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Row-wise `<x|y>` for arrays of shape `(..., n)`: both vectors are
    normalized first, the four combined norms are formed from the unit
    vectors and the result is scaled back by `||x|| ||y||`.
    """
    xs, ys = np.broadcast_arrays(xs, ys)
    norm_x, norm_y = evaluate(xs), evaluate(ys)
    zero = (norm_x < general_configuration.zero_norm) | (
        norm_y < general_configuration.zero_norm
    )
    x_hat = xs / np.where(zero, 1.0, norm_x)[..., None]
    y_hat = ys / np.where(zero, 1.0, norm_y)[..., None]
    combined = evaluate(
        np.stack([x_hat + y_hat, x_hat - y_hat, x_hat + 1j * y_hat, x_hat - 1j * y_hat])
    )
    unit = _combine(combined)
    values = np.where(zero, 0j, norm_x * (norm_y * unit))
    return values, norm_x, norm_y


def _as_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(x.array if isinstance(x, CVector) else x, dtype=np.complex128)
    ys = np.asarray(y.array if isinstance(y, CVector) else y, dtype=np.complex128)
    if xs.shape[-1:] != ys.shape[-1:]:
        raise ContractViolationError(
            f'x and y have different dimensions {xs.shape[-1]} and {ys.shape[-1]}.'
        )
    if not (np.isfinite(xs).all() and np.isfinite(ys).all()):
        raise ContractViolationError('Vector components must be finite.')
    return xs, ys


def products_batch(
    descriptor: NormDescriptor, xs: np.ndarray, ys: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xs, ys = _as_pair(xs, ys)
    return product_arrays(evaluator(descriptor, xs.shape[-1]), xs, ys)


def polarization_product(
    descriptor: NormDescriptor, x: CVector, y: CVector
) -> ProductValue:
    values, norm_x, norm_y = products_batch(descriptor, x.array, y.array)
    return ProductValue(
        value=complex(values), norm_x=float(norm_x), norm_y=float(norm_y)
    )


def phase_homogeneity_defect_at(
    descriptor: NormDescriptor, x: CVector, y: CVector, phi: float
) -> float:
    """
    `|<e^{i phi} x | y> - e^{i phi} <x|y>|`, zero for inner-product norms.
    """
    rotation = np.exp(1j * phi)
    xs, ys = _as_pair(x, y)
    values, _, _ = products_batch(descriptor, np.stack([rotation * xs, xs]), ys)
    return float(abs(values[0] - rotation * values[1]))


def polarization_identity_value(
    descriptor: NormDescriptor, x: CVector, y: CVector
) -> complex:
    """
    The polarization identity applied to `x` and `y` without normalizing.
    It agrees with `polarization_product` for norms coming from an inner
    product and in general differs from it.
    """
    xs, ys = _as_pair(x, y)
    norms = evaluator(descriptor, xs.shape[-1])(
        np.stack([xs + ys, xs - ys, xs + 1j * ys, xs - 1j * ys])
    )
    return complex(_combine(norms))


def sesquilinear_form(
    descriptor: HermitianQuadratic, x: CVector, y: CVector
) -> complex:
    """
    `y^H A x`, the inner product behind a Hermitian norm, linear in `x`.
    """
    xs, ys = _as_pair(x, y)
    return complex(np.vdot(ys, descriptor.array @ xs))
