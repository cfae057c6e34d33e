"""
Closed-form pieces of the Cauchy-Schwarz argument on C^2: the function R(b)
and its minimiser, the estimates (A) and (B), the inequalities (C) and (D)
with the algebra behind them, and the map G.
"""

import math
from typing import Optional

from scipy import optimize

from polarize.csb import configuration
from polarize.csb.reduction import StvwQuadruple
from polarize.errors import DomainError
from polarize.general.schema import Check

SQRT2 = math.sqrt(2)
HALF_SQRT2 = SQRT2 / 2


def _require_half(**values: float) -> None:
    for name, value in values.items():
        if not abs(value) >= 0.5:
            raise DomainError(f'|{name}| must be at least 1/2, got {value!r}.')


def _root(value: float) -> float:
    """`sqrt(4 value^2 - 1)`, clamped at zero for |value| = 1/2."""
    return math.sqrt(max(4 * value * value - 1, 0.0))


def r_function(b: float, w: float) -> float:
    if not w > 0:
        raise DomainError(f'w must be positive, got {w!r}.')
    return 2 * math.sqrt(1 + 2 * b * b - 2 * b) + SQRT2 * abs(b) / w


def b_star(w: float) -> float:
    """
    The stationary point of `r_function(., w)`; non-negative iff
    `w >= sqrt(2)/2`.
    """
    if not w > 0.5:
        raise DomainError(f'b_star needs w > 1/2, got {w!r}.')
    return 0.5 * (1 - 1 / _root(w))


def r_function_at_b_star(w: float) -> float:
    """`sqrt(2) (1 + sqrt(4 w^2 - 1)) / (2 w)`, valid for `w >= sqrt(2)/2`."""
    if not w >= HALF_SQRT2:
        raise DomainError(f'the closed form needs w >= sqrt(2)/2, got {w!r}.')
    return SQRT2 * (1 + _root(w)) / (2 * w)


def r_function_argmin(w: float) -> float:
    """Numerical minimiser of `r_function(., w)` over `[0, 1]`."""
    result = optimize.minimize_scalar(
        r_function,
        bounds=(0.0, 1.0),
        args=(w,),
        method='bounded',
        options={'xatol': 1e-12},
    )
    return float(result.x)


def _bound(value: float) -> float:
    return 2 + _root(value) / value**2


def bound_A(q: StvwQuadruple) -> Optional[Check]:
    """
    `(1/s)^2 <= 2 + sqrt(4 w^2 - 1) / w^2`, available for `w >= sqrt(2)/2`.
    Returns None when not applicable; the bound itself is the check's `rhs`.
    """
    if q.w < HALF_SQRT2 - configuration.tie_tol:
        return None
    bound = _bound(q.w)
    return Check.upper(
        'bound_A', (1 / q.s) ** 2, bound, configuration.inequality_tol * bound
    )


def bound_B(q: StvwQuadruple) -> Optional[Check]:
    """`(1/v)^2 <= 2 + sqrt(4 t^2 - 1) / t^2`, available for `t >= sqrt(2)/2`."""
    if q.t < HALF_SQRT2 - configuration.tie_tol:
        return None
    bound = _bound(q.t)
    return Check.upper(
        'bound_B', (1 / q.v) ** 2, bound, configuration.inequality_tol * bound
    )


def inequality_D(t: float, w: float) -> tuple[float, float]:
    _require_half(t=t, w=w)
    h, k = _root(t), _root(w)
    lhs = (2 * t * t - 1) * k + (2 * w * w - 1) * h
    rhs = 4 * t * t * w * w
    return lhs, rhs


def inequality_C_value(t: float, w: float) -> float:
    _require_half(t=t, w=w)
    first = _bound(w) - 1 / t**2
    second = _bound(t) - 1 / w**2
    return first**2 + second**2


def inequality_C(q: StvwQuadruple) -> tuple[float, float]:
    """`(lhs, 16 - lhs)` for the quadruple's `t` and `w`."""
    lhs = inequality_C_value(q.t, q.w)
    return lhs, 16 - lhs


def check_substitution_identity(t: float, w: float) -> Check:
    """
    With `h = sqrt(4 t^2 - 1)` and `k = sqrt(4 w^2 - 1)`, both sides of
    `h^2 k^2 + h^2 + k^2 + 1 - 2 (h^2 k - k + k^2 h - h) = [h (k - 1) - (k + 1)]^2`
    are evaluated and the check's `lhs` is their difference.
    """
    _require_half(t=t, w=w)
    h, k = _root(t), _root(w)
    left = h * h * k * k + h * h + k * k + 1 - 2 * (h * h * k - k + k * k * h - h)
    right = (h * (k - 1) - (k + 1)) ** 2
    scale = h * h * k * k + h * h + k * k + 1 + 2 * (h * h * k + k + k * k * h + h)
    return Check.residual(
        'substitution_identity', left - right, configuration.inequality_tol * scale
    )


def locus_t(w: float) -> float:
    """
    The `t` at which inequality (D) is an equality for the given `w`,
    `sqrt(2) w / (sqrt(4 w^2 - 1) - 1)`.
    """
    if not w > 0.5:
        raise DomainError(f'locus_t needs w > 1/2, got {w!r}.')
    k = _root(w)
    if abs(k - 1) < 1e-15:
        raise DomainError('the equality locus has a pole at w = sqrt(2)/2.')
    return SQRT2 * w / (k - 1)


def g_map(a: float, b: float) -> float:
    return math.hypot(1 - a, b) + math.hypot(1 - b, a) + math.hypot(a, b)


def g_diagonal_minimum() -> tuple[float, float]:
    """Location and value of the minimum of `g_map` on the diagonal a = b."""
    return (3 - math.sqrt(3)) / 6, math.sqrt(2 + math.sqrt(3))


def _diagonal_slope(a: float) -> float:
    return 2 * (2 * a - 1) / math.sqrt(1 - 2 * a + 2 * a * a) + SQRT2


def g_diagonal_minimum_numeric() -> tuple[float, float]:
    """
    The diagonal minimum found numerically: the location as the root of the
    derivative on `(0, 1/2)`, the value by bounded minimisation.
    """
    location = optimize.brentq(_diagonal_slope, 0.0, 0.5, xtol=1e-15)
    result = optimize.minimize_scalar(
        lambda a: g_map(a, a),
        bounds=(0.0, 1.0),
        method='bounded',
        options={'xatol': 1e-12},
    )
    return float(location), float(result.fun)
