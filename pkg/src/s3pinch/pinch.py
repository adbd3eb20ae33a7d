"""Scalar functions and one-dimensional solves behind the genus bounds.

Everything here is a closed-form evaluation or a monotone root solve; all
functions accept floats or numpy arrays (broadcasting elementwise) and reject
non-finite input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketFailure, DomainError

SQRT2 = math.sqrt(2.0)

# Root-solve knobs: bisect to this bracket width, then Newton-polish.
BISECT_WIDTH = 1e-8
NEWTON_STEPS = 20
ROOT_RTOL = 1e-12
BRACKET_MAX = 1e6


@dataclass(frozen=True)
class RootResult:
    """Outcome of a monotone 1-d root solve."""

    value: float
    residual: float
    bracket: tuple[float, float]
    iterations: int


def _require_finite(*xs) -> None:
    for x in xs:
        if not np.all(np.isfinite(x)):
            raise DomainError("non-finite input")


def _require_nonneg(t) -> None:
    _require_finite(t)
    if np.any(np.asarray(t) < 0):
        raise DomainError("argument must be >= 0")


def _x_minus_atan(x):
    """x - atan(x), stable for small x (direct subtraction cancels to 0)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 0.1
    xs = np.where(small, x, 0.0)
    x2 = xs * xs
    series = xs ** 3 * (1.0 / 3.0 + x2 * (-1.0 / 5.0 + x2 * (
        1.0 / 7.0 + x2 * (-1.0 / 9.0 + x2 * (1.0 / 11.0 + x2 * (-1.0 / 13.0))))))
    return np.where(small, series, x - np.arctan(x))


def f_pinch(t):
    """Pinching function sqrt(2)*t + (t^2 - 2)*atan(t/sqrt(2)), t >= 0.

    Evaluated as 2*(x - atan x) + t^2 * atan(x) with x = t/sqrt(2): both terms
    are nonnegative, so positivity survives roundoff for tiny t.
    """
    _require_nonneg(t)
    t = np.asarray(t, dtype=float)
    x = t / SQRT2
    out = 2.0 * _x_minus_atan(x) + t * t * np.arctan(x)
    return out if out.ndim else float(out)


def f_derivative(t):
    """Derivative of f_pinch: 2*sqrt(2)*t^2/(2+t^2) + 2*t*atan(t/sqrt(2))."""
    _require_nonneg(t)
    t = np.asarray(t, dtype=float)
    out = 2.0 * SQRT2 * t * t / (2.0 + t * t) + 2.0 * t * np.arctan(t / SQRT2)
    return out if out.ndim else float(out)


def f_series(t: float, terms: int) -> tuple[float, float]:
    """Alternating power series for f_pinch, valid on 0 <= t < sqrt(2).

    Terms are (-1)^(l+1) * 8l/(4l^2-1) * (t/sqrt(2))^(2l+1) for l = 1..terms.
    Returns the partial sum and the magnitude of the next term, which bounds
    the truncation error for this alternating series.
    """
    _require_nonneg(t)
    if t >= SQRT2:
        raise DomainError(f"series diverges for t >= sqrt(2), got t={t}")
    if terms < 0:
        raise DomainError("terms must be >= 0")
    x = t / SQRT2
    total = 0.0
    for l in range(1, terms + 1):
        total += (-1.0) ** (l + 1) * (8.0 * l / (4.0 * l * l - 1.0)) * x ** (2 * l + 1)
    nxt = terms + 1
    bound = (8.0 * nxt / (4.0 * nxt * nxt - 1.0)) * x ** (2 * nxt + 1)
    return total, bound


def solve_increasing(func, target: float, dfunc=None, hi_guess: float = 1.0) -> RootResult:
    """Solve func(x) = target for a strictly increasing func on [0, inf).

    Brackets by doubling from ``hi_guess``, bisects to width BISECT_WIDTH,
    then polishes with Newton steps when a derivative is supplied.
    """
    _require_finite(target)
    f0 = func(0.0)
    if target < f0:
        raise DomainError(f"target {target} below func(0) = {f0}")
    if target == f0:
        return RootResult(0.0, 0.0, (0.0, 0.0), 0)

    lo, hi = 0.0, hi_guess
    iters = 0
    while func(hi) < target:
        lo, hi = hi, hi * 2.0
        iters += 1
        if hi > BRACKET_MAX:
            raise BracketFailure(f"no root below {BRACKET_MAX} for target {target}")

    blo, bhi = lo, hi
    while bhi - blo > BISECT_WIDTH:
        mid = 0.5 * (blo + bhi)
        iters += 1
        if func(mid) < target:
            blo = mid
        else:
            bhi = mid

    x = 0.5 * (blo + bhi)
    if dfunc is not None:
        for _ in range(NEWTON_STEPS):
            r = func(x) - target
            d = dfunc(x)
            if d == 0.0:
                break
            step = r / d
            x -= step
            iters += 1
            if abs(step) <= ROOT_RTOL * (1.0 + abs(x)):
                break
    return RootResult(x, func(x) - target, (blo, bhi), iters)


def f_inverse(y: float) -> RootResult:
    """Inverse of f_pinch by bisection plus Newton polish (f is increasing)."""
    _require_finite(y)
    if y < 0:
        raise DomainError("f_inverse requires y >= 0")
    return solve_increasing(f_pinch, y, dfunc=f_derivative, hi_guess=SQRT2)


def lemma3_gap(k1, k2):
    """Slack of the two-variable curvature inequality, RHS - LHS >= 0.

    RHS - LHS = 2*(-1 + ((k2-k1)/2)^2)*atan((k2-k1)/2)
                + (1 + k1*k2)*(atan(k2) - atan(k1)),
    zero exactly when k1 = +-k2.
    """
    _require_finite(k1, k2)
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    if np.any(k1 > k2):
        raise DomainError("requires k1 <= k2")
    t = (k2 - k1) / 2.0
    out = 2.0 * (t * t - 1.0) * np.arctan(t) + (1.0 + k1 * k2) * (
        np.arctan(k2) - np.arctan(k1)
    )
    return out if out.ndim else float(out)


def lemma3_F(t, s):
    """Two-variable form of the gap: F(t, s) with k1 = s-t, k2 = s+t."""
    _require_finite(t, s)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0):
        raise DomainError("requires t >= 0")
    out = 2.0 * (t * t - 1.0) * np.arctan(t) + (1.0 + s * s - t * t) * (
        np.arctan(s + t) - np.arctan(s - t)
    )
    return out if out.ndim else float(out)


def lemma3_dFds(t, s):
    """Closed-form partial dF/ds."""
    _require_finite(t, s)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0):
        raise DomainError("requires t >= 0")
    out = 2.0 * s * (np.arctan(s + t) - np.arctan(s - t)) + (
        1.0 + s * s - t * t
    ) * (1.0 / (1.0 + (t + s) ** 2) - 1.0 / (1.0 + (t - s) ** 2))
    return out if out.ndim else float(out)


def lemma3_d2Fdtds(t, s):
    """Closed-form mixed partial d^2F/dtds, a manifestly nonnegative rational."""
    _require_finite(t, s)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0):
        raise DomainError("requires t >= 0")
    num = 32.0 * t * t * s * (1.0 + t * t + s * s)
    den = (1.0 + (t - s) ** 2) ** 2 * (1.0 + (t + s) ** 2) ** 2
    out = num / den
    return out if out.ndim else float(out)


def _cubic_gap_series(x):
    # Tail of the alternating power series of f past its leading cubic term,
    # negated: sum_{l>=2} (-1)^l * 8l/(4l^2-1) * x^(2l+1), convergent for x < 1.
    total = np.zeros_like(x)
    term_scale = x ** 5
    x2 = x * x
    for l in range(2, 200):
        term = (-1.0) ** l * (8.0 * l / (4.0 * l * l - 1.0)) * term_scale
        total += term
        term_scale = term_scale * x2
        if np.all(np.abs(term) <= 1e-17 * (np.abs(total) + 1e-300)):
            break
    return total


def cubic_gap(t):
    """Slack of the cubic bound: 2*sqrt(2)*t^3/3 - f_pinch(t) > 0 for t > 0.

    For t < 1 the direct difference cancels to noise, so the slack is summed
    from the alternating series of f beyond its leading cubic term.
    """
    _require_nonneg(t)
    t = np.asarray(t, dtype=float)
    small = t < 1.0
    x = np.where(small, t, 0.0) / SQRT2
    series = _cubic_gap_series(x)
    direct = 2.0 * SQRT2 * t ** 3 / 3.0 - (
        SQRT2 * t + (t * t - 2.0) * np.arctan(t / SQRT2))
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def acot(x):
    """Arc-cotangent with range (0, pi): acot(x) = pi/2 - atan(x)."""
    _require_finite(x)
    x = np.asarray(x, dtype=float)
    out = np.pi / 2.0 - np.arctan(x)
    return out if out.ndim else float(out)


def hk_integrand(k1, k2, t):
    """Heintze-Karcher tube Jacobian (cos t - k1 sin t)(cos t - k2 sin t)."""
    _require_finite(k1, k2, t)
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    t = np.asarray(t, dtype=float)
    out = (np.cos(t) - k1 * np.sin(t)) * (np.cos(t) - k2 * np.sin(t))
    return out if out.ndim else float(out)


def hk_time_integral(k1, k2):
    """Tube Jacobian integrated over [0, acot(k2)] in closed form.

    Equals (1/2)*(-k1 + (1 + k1*k2)*acot(k2)); the upper limit is the focal
    time along the normal geodesic.
    """
    _require_finite(k1, k2)
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    if np.any(k1 > k2):
        raise DomainError("requires k1 <= k2")
    out = 0.5 * (-k1 + (1.0 + k1 * k2) * (np.pi / 2.0 - np.arctan(k2)))
    return out if out.ndim else float(out)


def prop1_integrand(k1, k2):
    """Genus-bound integrand k2 - k1 - (1 + k1*k2)*(atan k2 - atan k1)."""
    _require_finite(k1, k2)
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    if np.any(k1 > k2):
        raise DomainError("requires k1 <= k2")
    out = k2 - k1 - (1.0 + k1 * k2) * (np.arctan(k2) - np.arctan(k1))
    return out if out.ndim else float(out)


def beta_pinch(b):
    """Strictly increasing map beta -> beta + (beta^2 - 1)*atan(beta)."""
    _require_nonneg(b)
    b = np.asarray(b, dtype=float)
    out = b + (b * b - 1.0) * np.arctan(b)
    return out if out.ndim else float(out)


def beta_solve(g0: int, area: float) -> RootResult:
    """Solve beta + (beta^2 - 1)*atan(beta) = 2*g0*pi^2 / area for beta >= 0."""
    if not isinstance(g0, (int, np.integer)) or g0 < 1:
        raise DomainError("g0 must be a positive integer")
    _require_finite(area)
    if area <= 0:
        raise DomainError("area must be positive")
    rhs = 2.0 * g0 * math.pi ** 2 / area
    dphi = lambda b: 2.0 * b * math.atan(b) + 2.0 * b * b / (1.0 + b * b)
    return solve_increasing(beta_pinch, rhs, dfunc=dphi)


S3_VOLUME = 2.0 * math.pi ** 2


def min_surface_maxA_bound(g: int, ambient_volume: float = S3_VOLUME) -> float:
    """Lower bound on max |A| for a minimal surface of genus g.

    f^{-1}((2*pi^2*(g-1) + |M|) / (4*pi*floor((g+3)/2))); for the unit
    3-sphere ambient this is f^{-1}((pi/2) * g / floor((g+3)/2)).
    """
    if not isinstance(g, (int, np.integer)) or g < 1:
        raise DomainError("genus must be an integer >= 1")
    _require_finite(ambient_volume)
    if not (0.0 < ambient_volume <= S3_VOLUME):
        raise DomainError("ambient volume must lie in (0, 2*pi^2]")
    arg = (2.0 * math.pi ** 2 * (g - 1) + ambient_volume) / (
        4.0 * math.pi * ((g + 3) // 2)
    )
    return f_inverse(arg).value


def eigenvalue_bound_rhs(area: float, integral_f: float, ambient_volume: float = S3_VOLUME) -> float:
    """Right side of the first-eigenvalue bound on lambda_1 * Area.

    16*pi - 4*|M|/pi + (2/pi)*integral_f; reduces to 8*pi + (2/pi)*integral_f
    when the ambient is the unit 3-sphere.
    """
    _require_finite(area, integral_f, ambient_volume)
    if area < 0 or integral_f < 0:
        raise DomainError("area and integral_f must be >= 0")
    if not (0.0 < ambient_volume <= S3_VOLUME):
        raise DomainError("ambient volume must lie in (0, 2*pi^2]")
    return 16.0 * math.pi - 4.0 * ambient_volume / math.pi + (2.0 / math.pi) * integral_f
