"""Exact parametric surface families in the unit 3-sphere.

Each surface supplies analytic partials for the immersion into 4-space, a
side classifier for the two complementary regions, and whatever closed-form
data (area, side volumes, curvatures, first eigenvalue) exists for it.

Orientation convention used throughout the toolkit: the frame normal is
cross4(position, du, dv) normalized, and *side 1* is the region that normal
points into.  The parameter charts below are ordered so that a geodesic
sphere gets normal curvature +cot(r) (normal into the ball).
"""

from __future__ import annotations

import functools
import math

import numpy as np
import sympy as sp

from .errors import DomainError, ImmersionFailure
from .geometry import SurfacePoint, first_fundamental_form

S3_VOLUME = 2.0 * math.pi ** 2
TWO_PI = 2.0 * math.pi

_R_MIN = 1e-3
_EPS_CAP = 0.3
_MINIMAL_TOL = 1e-9


def _bcast(component, shape):
    return np.broadcast_to(np.asarray(component, dtype=float), shape)


class Surface:
    """Base class: a parametric immersion (u, v) -> S^3 with side data."""

    name: str = "surface"
    domain_u: tuple[float, float] = (0.0, TWO_PI)
    domain_v: tuple[float, float] = (0.0, TWO_PI)
    periodic_u: bool = True
    periodic_v: bool = True
    is_minimal: bool = False

    # Closed-form data, None when unavailable.
    exact_area: float | None = None
    exact_side_volumes: tuple[float, float] | None = None
    exact_lambda1: float | None = None
    exact_principal_curvatures: tuple[float, float] | None = None

    def point(self, u, v) -> SurfacePoint:
        raise NotImplementedError

    def side_classifier(self, x: np.ndarray) -> np.ndarray:
        """True where the unit 4-vector(s) x lie on side 1."""
        raise NotImplementedError


class GeodesicSphere(Surface):
    """Distance sphere of radius r about the pole (0,0,0,1).

    Chart: u = azimuth (periodic), v = polar angle in (0, pi).  With the
    toolkit's frame order the normal points into the ball and both principal
    curvatures equal cot(r).
    """

    periodic_u = True
    periodic_v = False
    domain_v = (0.0, math.pi)

    def __init__(self, r: float):
        if not np.isfinite(r) or not (_R_MIN <= r <= math.pi - _R_MIN):
            raise DomainError(f"sphere radius must lie in [{_R_MIN}, pi-{_R_MIN}], got {r}")
        self.r = float(r)
        self.name = f"sphere:r={self.r:.10g}"
        self.is_minimal = abs(self.r - math.pi / 2) < _MINIMAL_TOL
        sr = math.sin(self.r)
        ball = math.pi * (2.0 * self.r - math.sin(2.0 * self.r))
        self.exact_area = 4.0 * math.pi * sr * sr
        self.exact_side_volumes = (ball, S3_VOLUME - ball)
        self.exact_lambda1 = 2.0 / (sr * sr)
        k = 1.0 / math.tan(self.r)
        self.exact_principal_curvatures = (k, k)

    def point(self, u, v) -> SurfacePoint:
        phi = np.asarray(u, dtype=float)
        th = np.asarray(v, dtype=float)
        phi, th = np.broadcast_arrays(phi, th)
        sr, cr = math.sin(self.r), math.cos(self.r)
        st, ct = np.sin(th), np.cos(th)
        sp_, cp = np.sin(phi), np.cos(phi)
        zeros = np.zeros_like(th)
        cr_arr = np.full_like(th, cr)

        pos = np.stack([sr * st * cp, sr * st * sp_, sr * ct, cr_arr], axis=-1)
        du = np.stack([-sr * st * sp_, sr * st * cp, zeros, zeros], axis=-1)
        dv = np.stack([sr * ct * cp, sr * ct * sp_, -sr * st, zeros], axis=-1)
        duu = np.stack([-sr * st * cp, -sr * st * sp_, zeros, zeros], axis=-1)
        duv = np.stack([-sr * ct * sp_, sr * ct * cp, zeros, zeros], axis=-1)
        dvv = np.stack([-sr * st * cp, -sr * st * sp_, -sr * ct, zeros], axis=-1)
        return SurfacePoint(pos, du, dv, duu, duv, dvv)

    def side_classifier(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[..., 3] > math.cos(self.r)


class FlatTorus(Surface):
    """Product torus (a cos u, a sin u, b cos v, b sin v), b = sqrt(1-a^2).

    Flat (K = 0), principal curvatures {-a/b, b/a} with respect to the frame
    normal, which points into the solid torus {x1^2 + x2^2 < a^2} (side 1).
    a = 1/sqrt(2) is the Clifford torus, the minimal member of the family.
    """

    def __init__(self, a: float):
        if not np.isfinite(a) or not (0.0 < a < 1.0):
            raise DomainError(f"torus parameter must lie in (0, 1), got {a}")
        self.a = float(a)
        self.b = math.sqrt(1.0 - self.a * self.a)
        self.name = f"torus:a={self.a:.10g}"
        self.is_minimal = abs(self.a - 1.0 / math.sqrt(2.0)) < _MINIMAL_TOL
        self.exact_area = 4.0 * math.pi ** 2 * self.a * self.b
        self.exact_side_volumes = (S3_VOLUME * self.a ** 2, S3_VOLUME * self.b ** 2)
        self.exact_principal_curvatures = (-self.a / self.b, self.b / self.a)
        if self.is_minimal:
            self.exact_lambda1 = 2.0

    def point(self, u, v) -> SurfacePoint:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        u, v = np.broadcast_arrays(u, v)
        a, b = self.a, self.b
        cu, su = np.cos(u), np.sin(u)
        cv, sv = np.cos(v), np.sin(v)
        zeros = np.zeros_like(u)

        pos = np.stack([a * cu, a * su, b * cv, b * sv], axis=-1)
        du = np.stack([-a * su, a * cu, zeros, zeros], axis=-1)
        dv = np.stack([zeros, zeros, -b * sv, b * cv], axis=-1)
        duu = np.stack([-a * cu, -a * su, zeros, zeros], axis=-1)
        duv = np.stack([zeros, zeros, zeros, zeros], axis=-1)
        dvv = np.stack([zeros, zeros, -b * cv, -b * sv], axis=-1)
        return SurfacePoint(pos, du, dv, duu, duv, dvv)

    def side_classifier(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        return x[..., 0] ** 2 + x[..., 1] ** 2 < self.a ** 2


def clifford_torus() -> FlatTorus:
    """The minimal flat torus, a = 1/sqrt(2)."""
    return FlatTorus(1.0 / math.sqrt(2.0))


class PerturbedSphere(Surface):
    """Geodesic-polar graph r + eps * Z_lm over the round sphere chart.

    Z_lm is the real spherical harmonic with unit L^2 norm on the 2-sphere.
    Partials come from symbolic differentiation of the immersion, so the
    surface is exactly as smooth as its formula.  Genus-0 test surface with
    strictly positive pinching integrand for eps != 0.
    """

    periodic_u = True
    periodic_v = False
    domain_v = (0.0, math.pi)

    def __init__(self, r: float, eps: float, l: int, m: int, probe: int = 24):
        if not np.isfinite(r) or not (_R_MIN <= r <= math.pi - _R_MIN):
            raise DomainError(f"sphere radius must lie in [{_R_MIN}, pi-{_R_MIN}], got {r}")
        if not np.isfinite(eps) or abs(eps) > _EPS_CAP:
            raise DomainError(f"|eps| must be <= {_EPS_CAP}, got {eps}")
        if not (isinstance(l, (int, np.integer)) and isinstance(m, (int, np.integer))):
            raise DomainError("mode numbers l, m must be integers")
        if l < 0 or abs(m) > l:
            raise DomainError(f"invalid spherical-harmonic mode (l={l}, m={m})")
        self.r, self.eps, self.l, self.m = float(r), float(eps), int(l), int(m)
        self.name = f"psphere:r={self.r:.10g},eps={self.eps:.10g},l={self.l},m={self.m}"

        # Radius and amplitude stay symbolic so the expensive lambdify work
        # is cached once per harmonic mode (l, m).
        fns = _psphere_functions(self.l, self.m)

        def fix(fs):
            return [lambda phi, th, f=f: f(phi, th, self.r, self.eps) for f in fs]

        self._pos = fix(fns["pos"])
        self._du = fix(fns["du"])
        self._dv = fix(fns["dv"])
        self._duu = fix(fns["duu"])
        self._duv = fix(fns["duv"])
        self._dvv = fix(fns["dvv"])
        self._rho = lambda th, ph: fns["rho"](ph, th, self.r, self.eps)

        self._check_immersion(probe)

    def _rho_of(self, theta, phi):
        theta = np.asarray(theta, dtype=float)
        out = self._rho(theta, np.asarray(phi, dtype=float))
        return _bcast(out, theta.shape) if np.shape(out) != theta.shape else out

    def _check_immersion(self, n: int) -> None:
        uu = np.linspace(0.0, TWO_PI, n, endpoint=False)
        vv = np.linspace(math.pi / (n + 1), math.pi - math.pi / (n + 1), n)
        U, V = np.meshgrid(uu, vv, indexing="ij")
        rho = self._rho_of(V, U)
        if np.any(rho <= 0.0) or np.any(rho >= math.pi):
            raise DomainError("perturbed radius leaves (0, pi); reduce eps")
        p = self.point(U, V)
        E, F, G = first_fundamental_form(p)
        det = E * G - F * F
        if np.any(det <= 1e-12 * E * G):
            raise ImmersionFailure("EG - F^2 degenerates at a probe node; reduce eps")

    def point(self, u, v) -> SurfacePoint:
        phi = np.asarray(u, dtype=float)
        th = np.asarray(v, dtype=float)
        phi, th = np.broadcast_arrays(phi, th)
        shape = phi.shape

        def ev(fns):
            return np.stack([_bcast(f(phi, th), shape) for f in fns], axis=-1)

        return SurfacePoint(
            ev(self._pos), ev(self._du), ev(self._dv),
            ev(self._duu), ev(self._duv), ev(self._dvv),
        )

    def side_classifier(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        psi = np.arccos(np.clip(x[..., 3], -1.0, 1.0))
        rad = np.sqrt(x[..., 0] ** 2 + x[..., 1] ** 2 + x[..., 2] ** 2)
        theta = np.arccos(np.clip(np.divide(x[..., 2], np.where(rad == 0, 1.0, rad)), -1.0, 1.0))
        phi = np.arctan2(x[..., 1], x[..., 0])
        return psi < self._rho_of(theta, phi)


@functools.lru_cache(maxsize=None)
def _psphere_functions(l: int, m: int) -> dict:
    """Lambdified position map and partials for a Znm-perturbed sphere.

    Radius r and amplitude eps are left as arguments so the symbolic work
    happens once per mode.  Znm is real-valued but expand_func leaves it in
    complex-exponential form; rewrite to trig and drop the identically-zero
    imaginary part.
    """
    th, ph, r_s, eps_s = sp.symbols("theta phi r eps", real=True)
    harmonic = sp.expand_func(sp.Znm(l, m, th, ph))
    harmonic = sp.simplify(sp.re(sp.expand(harmonic.rewrite(sp.cos))))
    rho = r_s + eps_s * harmonic
    direction = [sp.sin(th) * sp.cos(ph), sp.sin(th) * sp.sin(ph), sp.cos(th)]
    pos = [sp.sin(rho) * d for d in direction] + [sp.cos(rho)]

    # Chart order matches GeodesicSphere: u = phi, v = theta.
    def lamb(exprs):
        return [sp.lambdify((ph, th, r_s, eps_s), e, "numpy") for e in exprs]

    return {
        "pos": lamb(pos),
        "du": lamb([sp.diff(e, ph) for e in pos]),
        "dv": lamb([sp.diff(e, th) for e in pos]),
        "duu": lamb([sp.diff(e, ph, 2) for e in pos]),
        "duv": lamb([sp.diff(e, ph, th) for e in pos]),
        "dvv": lamb([sp.diff(e, th, 2) for e in pos]),
        "rho": sp.lambdify((ph, th, r_s, eps_s), rho, "numpy"),
    }


class FiniteDifferenceSurface(Surface):
    """Wraps a bare position map with central-difference partials.

    Step size follows the usual optimal-tradeoff rule
    h = max(|x|, 1) * eps_machine^(1/3); second partials are nested central
    differences of the position map.
    """

    def __init__(self, position, domain_u, domain_v, periodic_u=True, periodic_v=True,
                 name="fd-surface"):
        self._position = position
        self.domain_u = domain_u
        self.domain_v = domain_v
        self.periodic_u = periodic_u
        self.periodic_v = periodic_v
        self.name = name

    @staticmethod
    def _step(x: np.ndarray) -> np.ndarray:
        return np.maximum(np.abs(x), 1.0) * np.finfo(float).eps ** (1.0 / 3.0)

    def point(self, u, v) -> SurfacePoint:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        u, v = np.broadcast_arrays(u, v)
        f = lambda uu, vv: np.asarray(self._position(uu, vv), dtype=float)
        hu = self._step(u)
        hv = self._step(v)
        # Trailing 4-vector axis: divide by steps with an added axis.
        hu4 = hu[..., np.newaxis] if hu.ndim else hu
        hv4 = hv[..., np.newaxis] if hv.ndim else hv

        pos = f(u, v)
        du = (f(u + hu, v) - f(u - hu, v)) / (2.0 * hu4)
        dv = (f(u, v + hv) - f(u, v - hv)) / (2.0 * hv4)
        duu = (f(u + hu, v) - 2.0 * pos + f(u - hu, v)) / hu4 ** 2
        dvv = (f(u, v + hv) - 2.0 * pos + f(u, v - hv)) / hv4 ** 2
        duv = (f(u + hu, v + hv) - f(u + hu, v - hv)
               - f(u - hu, v + hv) + f(u - hu, v - hv)) / (4.0 * hu4 * hv4)
        return SurfacePoint(pos, du, dv, duu, duv, dvv)


def sample_s3(n: int, rng: np.random.Generator) -> np.ndarray:
    """n uniform samples on S^3 via normalized 4-d Gaussian draws."""
    x = rng.normal(size=(n, 4))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def parse_surface(spec: str) -> Surface:
    """Build a catalog surface from a spec string.

    Formats: ``sphere:r=<float>``, ``torus:a=<float>``,
    ``psphere:r=<float>,eps=<float>,l=<int>,m=<int>``.
    """
    try:
        kind, _, rest = spec.partition(":")
        kv = {}
        if rest:
            for part in rest.split(","):
                key, _, val = part.partition("=")
                if not val:
                    raise ValueError(f"missing value in '{part}'")
                kv[key.strip()] = val.strip()
        if kind == "sphere":
            return GeodesicSphere(float(kv.pop("r")))
        if kind == "torus":
            return FlatTorus(float(kv.pop("a")))
        if kind == "psphere":
            return PerturbedSphere(
                float(kv.pop("r")), float(kv.pop("eps")),
                int(kv.pop("l")), int(kv.pop("m")),
            )
        raise ValueError(f"unknown surface kind '{kind}'")
    except (KeyError, ValueError) as exc:
        raise DomainError(f"bad surface spec '{spec}': {exc}") from exc
