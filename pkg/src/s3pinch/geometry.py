"""Pointwise extrinsic geometry of surfaces immersed in the unit 3-sphere.

A surface point carries the immersion value (a unit 4-vector) together with
first and second parameter partials.  All operations broadcast over leading
array dimensions, so a whole quadrature grid can be processed in one call;
scalars work the same way with shape-(4,) vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric

# Relative threshold below which E*G - F^2 counts as degenerate.
DEGENERACY_RTOL = 1e-12
# Principal curvatures closer than this are reported as an exact umbilic.
UMBILIC_TOL = 1e-10


@dataclass(frozen=True)
class SurfacePoint:
    """Immersion value and parameter partials at one point (or a batch).

    ``position`` must be a unit 4-vector tangent-orthogonal to ``du`` and
    ``dv``; ``duu``, ``duv``, ``dvv`` are the raw second partials of the
    immersion into 4-space.
    """

    position: np.ndarray
    du: np.ndarray
    dv: np.ndarray
    duu: np.ndarray
    duv: np.ndarray
    dvv: np.ndarray


@dataclass(frozen=True)
class CurvatureData:
    """Principal curvatures (k1 <= k2) and derived pointwise quantities."""

    k1: np.ndarray
    k2: np.ndarray
    H: np.ndarray
    traceless_norm: np.ndarray
    gauss_K: np.ndarray
    normal: np.ndarray


def dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean inner product over the trailing axis."""
    return np.sum(a * b, axis=-1)


def cross4(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Generalized cross product in 4-space: n_i = eps_{ijkl} a_j b_k c_l.

    The result is orthogonal to all three arguments and its orientation is
    fixed by the argument order.
    """
    m = np.stack(np.broadcast_arrays(a, b, c), axis=-2)
    out = np.empty(m.shape[:-2] + (4,), dtype=float)
    cols = np.arange(4)
    for i in range(4):
        sub = m[..., cols != i]
        out[..., i] = (-1.0) ** i * np.linalg.det(sub)
    return out


def first_fundamental_form(p: SurfacePoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Metric components (E, F, G) of the parametrization."""
    return dot(p.du, p.du), dot(p.du, p.dv), dot(p.dv, p.dv)


def tangent_normal_frame(p: SurfacePoint):
    """Unit normal and metric components at a surface point.

    The normal is the normalized 4-dimensional cross product of
    ``(position, du, dv)``, hence orthogonal to the sphere radius and to both
    tangent vectors, with a deterministic orientation.

    Raises
    ------
    DegenerateMetric
        If E*G - F^2 <= DEGENERACY_RTOL * E*G at any point of the batch.
    """
    E, F, G = first_fundamental_form(p)
    det = E * G - F * F
    bad = det <= DEGENERACY_RTOL * E * G
    if np.any(bad):
        where = np.argwhere(np.atleast_1d(bad))[0]
        raise DegenerateMetric(
            f"first fundamental form degenerate at batch index {tuple(where)}: "
            f"EG-F^2 = {np.atleast_1d(det)[tuple(where)]:.3e}"
        )
    nu = cross4(p.position, p.du, p.dv)
    nu = nu / np.linalg.norm(nu, axis=-1, keepdims=True)
    return nu, (E, F, G)


def curvature_at(p: SurfacePoint) -> CurvatureData:
    """Principal curvatures and derived invariants at a surface point.

    k1 <= k2 are the eigenvalues of the shape operator I^{-1} II, where the
    second fundamental form is read off the raw 4-space second partials
    through the unit normal (components along the sphere radius drop out
    because the normal is tangent to the 3-sphere).
    """
    nu, (E, F, G) = tangent_normal_frame(p)
    det = E * G - F * F
    e = dot(p.duu, nu)
    f = dot(p.duv, nu)
    g = dot(p.dvv, nu)

    # Eigenvalues via the symmetric reduction M = L^-1 II L^-T with I = L L^T
    # (Cholesky): same spectrum as I^-1 II, but the eigenvalue gap comes from
    # sqrt(((m11-m22)/2)^2 + m12^2) with no catastrophic cancellation, so
    # umbilic points stay umbilic to roundoff.
    tr_s = (e * G - 2.0 * f * F + g * E) / det
    m11 = e / E
    m12 = (f * E - e * F) / (E * np.sqrt(det))
    m22 = tr_s - m11
    half_gap = np.sqrt(((m11 - m22) / 2.0) ** 2 + m12 ** 2)
    mean = tr_s / 2.0

    # Umbilic tie-break: suppress noise-driven splitting of equal eigenvalues.
    half_gap = np.where(2.0 * half_gap < UMBILIC_TOL, 0.0, half_gap)
    k1 = mean - half_gap
    k2 = mean + half_gap

    return CurvatureData(
        k1=k1,
        k2=k2,
        H=mean,
        traceless_norm=(k2 - k1) / np.sqrt(2.0),
        gauss_K=1.0 + k1 * k2,
        normal=nu,
    )


def flip_orientation(c: CurvatureData) -> CurvatureData:
    """Curvature data with respect to the opposite unit normal."""
    return CurvatureData(
        k1=-c.k2,
        k2=-c.k1,
        H=-c.H,
        traceless_norm=c.traceless_norm,
        gauss_K=c.gauss_K,
        normal=-c.normal,
    )
