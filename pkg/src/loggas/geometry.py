"""Inverse stereographic projection onto the Riemann sphere.

The sphere has radius 1/2 and center (0, 0, 1/2); the north pole
(0, 0, 1) plays the role of the point at infinity and is an explicit,
flagged case of SpherePoint rather than a coordinate coincidence.

The projection of a finite complex x is

    T(x) = (Re x, Im x, |x|^2) / (1 + |x|^2),

and the induced chord length between projected points is

    |T(x) - T(y)| = |x - y| / sqrt((1 + |x|^2)(1 + |y|^2)),

which is bounded by the sphere diameter 1.  A useful consequence: the
squared distance of T(x) from the origin equals its own height
coordinate, so 1 - |T(x)|^2 = 1/(1 + |x|^2) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleModel, PoleNotInvertible
from .model import DiscreteMeasure, GasModel, PROBE_EXPONENTS

SPHERE_TOL = 1e-12

# Above this modulus the direct projection formula would square |x| into
# overflow territory; an equivalent form in t = 1/|x| is used instead.
_LARGE_MODULUS = 1e8


@dataclass(frozen=True)
class SpherePoint:
    """A point of the radius-1/2 sphere centered at (0, 0, 1/2)."""

    x1: float
    x2: float
    x3: float
    pole: bool = False

    def __post_init__(self):
        if self.pole:
            if (self.x1, self.x2, self.x3) != (0.0, 0.0, 1.0):
                raise ValueError("the pole has coordinates (0, 0, 1)")
            return
        err = self.x1**2 + self.x2**2 + (self.x3 - 0.5) ** 2 - 0.25
        if abs(err) > SPHERE_TOL:
            raise ValueError(f"point is off the sphere by {err:.3g}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


POLE = SpherePoint(0.0, 0.0, 1.0, pole=True)


def project(x: complex) -> SpherePoint:
    """Map a finite complex number onto the sphere."""
    x = complex(x)
    r = abs(x)
    if r > _LARGE_MODULUS:
        # (Re x, Im x, |x|^2)/(1+|x|^2) = (Re u * t, Im u * t, 1)/(1 + t^2)
        # with u = x/|x| and t = 1/|x|; avoids forming |x|^2.
        t = 1.0 / r
        denom = 1.0 + t * t
        u = x * t
        return SpherePoint(u.real * t / denom, u.imag * t / denom, 1.0 / denom)
    r2 = x.real * x.real + x.imag * x.imag
    denom = 1.0 + r2
    return SpherePoint(x.real / denom, x.imag / denom, r2 / denom)


def project_array(xs) -> np.ndarray:
    """Vectorized projection; returns an (n, 3) array."""
    xs = np.asarray(xs, dtype=complex)
    out = np.empty(xs.shape + (3,), dtype=float)
    r2 = xs.real**2 + xs.imag**2
    denom = 1.0 + r2
    out[..., 0] = xs.real / denom
    out[..., 1] = xs.imag / denom
    out[..., 2] = r2 / denom
    big = np.abs(xs) > _LARGE_MODULUS
    if np.any(big):
        t = 1.0 / np.abs(xs[big])
        dt = 1.0 + t * t
        u = xs[big] * t
        out[big, 0] = u.real * t / dt
        out[big, 1] = u.imag * t / dt
        out[big, 2] = 1.0 / dt
    return out


def unproject(z: SpherePoint) -> complex:
    """Inverse of project; the pole has no finite preimage.

    Above the half-height the subtraction 1 - x3 would cost relative
    precision like ulp/(1 - x3), so the sphere constraint
    x1^2 + x2^2 = x3 (1 - x3) is used to rebuild the modulus from the
    well-scaled horizontal coordinates instead.
    """
    if z.pole:
        raise PoleNotInvertible("the north pole is not the image of any finite point")
    if z.x3 <= 0.5:
        return complex(z.x1, z.x2) / (1.0 - z.x3)
    s = math.hypot(z.x1, z.x2)
    if s == 0.0:
        # coordinates are exactly (0, 0, 1): the pole in all but flag
        raise PoleNotInvertible("point coincides with the north pole")
    scale = z.x3 / s
    return complex(z.x1 / s * scale, z.x2 / s * scale)


def unproject_array(zs: np.ndarray) -> np.ndarray:
    zs = np.asarray(zs, dtype=float)
    x1, x2, x3 = zs[..., 0], zs[..., 1], zs[..., 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (x1 + 1j * x2) / (1.0 - x3)
    high = x3 > 0.5
    if np.any(high):
        s = np.hypot(x1[high], x2[high])
        if np.any(s == 0.0):
            raise PoleNotInvertible("a point coincides with the north pole")
        scale = x3[high] / s
        out[high] = (x1[high] / s + 1j * (x2[high] / s)) * scale
    return out


def chordal_distance(x: complex, y: complex) -> float:
    """Distance between the projections of x and y, in planar coordinates.

    Always in [0, 1]; equals the Euclidean distance of the projected
    points in R^3.
    """
    x = complex(x)
    y = complex(y)
    d = abs(x - y) / (math.hypot(1.0, abs(x)) * math.hypot(1.0, abs(y)))
    return min(d, 1.0)


def sphere_distance_matrix(zs: np.ndarray) -> np.ndarray:
    """Pairwise Euclidean distances between rows of an (n, 3) array."""
    diff = zs[:, None, :] - zs[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


@dataclass(frozen=True)
class CompactifiedPotential:
    """The sphere-side potential induced by a gas model.

    On projected points it equals V(x) - (beta/2) log(1 + |x|^2); at the
    pole it takes the liminf of that expression, supplied in closed form
    for structured potentials and otherwise estimated from the probe
    grid (``pole_is_estimate`` is then True).
    """

    model: GasModel
    pole_value: float
    pole_is_estimate: bool = False

    def __call__(self, z: SpherePoint) -> float:
        if z.pole:
            return self.pole_value
        x = unproject(z)
        v = float(self.model.potential_values(np.array([x]))[0])
        return v + (self.model.beta / 2.0) * math.log1p(-z.x3)

    def on_plane(self, x) -> np.ndarray:
        """Evaluate at T(x) directly from planar coordinates (exact form)."""
        xs = np.asarray(x, dtype=complex)
        v = self.model.potential_values(xs)
        return v - (self.model.beta / 2.0) * np.log1p(np.abs(xs) ** 2)

    def on_sphere_array(self, zs: np.ndarray) -> np.ndarray:
        """Evaluate at sphere points given as rows of an (n, 3) array."""
        zs = np.asarray(zs, dtype=float)
        xs = unproject_array(zs)
        v = self.model.potential_values(xs)
        return v + (self.model.beta / 2.0) * np.log1p(-zs[..., 2])


def compactified_potential(model: GasModel) -> CompactifiedPotential:
    """Build the sphere-side potential for an admissible model."""
    if not model.weak_growth_ok:
        raise InadmissibleModel(
            "model fails weak-growth admissibility: the compactified potential "
            "would be -infinity at the pole"
        )
    pole = model.potential.pole_value(model.beta, model.support)
    if pole is not None:
        return CompactifiedPotential(model, float(pole))
    # Probe estimate: infimum of V - (beta/2) log(1+|x|^2) over the two
    # largest dyadic scales, flagged approximate.
    rays = model.support.probe_rays()
    radii = np.array([2.0**k for k in list(PROBE_EXPONENTS)[-2:]])
    pts = (radii[:, None] * rays[None, :]).ravel()
    vals = model.potential_values(pts) - (model.beta / 2.0) * np.log1p(np.abs(pts) ** 2)
    return CompactifiedPotential(model, float(np.min(vals)), pole_is_estimate=True)


def pushforward(mu: DiscreteMeasure) -> DiscreteMeasure:
    """Map a plane measure to the sphere atom-by-atom, weights unchanged."""
    if mu.side != "plane":
        raise ValueError("pushforward expects a plane-side measure")
    if not np.all(np.isfinite(mu.positions)):
        raise ValueError("pushforward requires finite atoms")
    return DiscreteMeasure(project_array(mu.positions), mu.weights.copy(), side="sphere")
