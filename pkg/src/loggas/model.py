"""Domain types for Coulomb gas models.

A gas is a tuple (support, inverse temperature beta, potential V, particle
count n).  The joint particle density is proportional to

    prod_{i<j} |x_i - x_j|^beta * prod_i exp(-n * V(x_i))

on the n-fold product of the support.  Everything here is an immutable
value type; functions elsewhere never mutate them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import MissingBetaPrime

# Points of real supports are carried as complex values with (near-)zero
# imaginary part; this is the membership tolerance on the imaginary part.
REAL_AXIS_TOL = 1e-12

# Dyadic probe radii 2^k used by the growth classification heuristic.
PROBE_EXPONENTS = range(4, 41)


class Support(enum.Enum):
    """The five supported particle domains (subsets of the complex plane)."""

    REAL_LINE = "real_line"
    COMPLEX_PLANE = "complex_plane"
    HALF_LINE = "half_line"
    UNIT_SEGMENT = "unit_segment"
    UNIT_CIRCLE = "unit_circle"

    def contains(self, z: complex) -> bool:
        z = complex(z)
        if self is Support.COMPLEX_PLANE:
            return math.isfinite(z.real) and math.isfinite(z.imag)
        if self is Support.UNIT_CIRCLE:
            return abs(abs(z) - 1.0) <= REAL_AXIS_TOL
        if abs(z.imag) > REAL_AXIS_TOL:
            return False
        if self is Support.REAL_LINE:
            return math.isfinite(z.real)
        if self is Support.HALF_LINE:
            return z.real >= 0.0
        return 0.0 <= z.real <= 1.0  # UNIT_SEGMENT

    def contains_array(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        if self is Support.COMPLEX_PLANE:
            return np.isfinite(zs.real) & np.isfinite(zs.imag)
        if self is Support.UNIT_CIRCLE:
            return np.abs(np.abs(zs) - 1.0) <= REAL_AXIS_TOL
        on_axis = np.abs(zs.imag) <= REAL_AXIS_TOL
        if self is Support.REAL_LINE:
            return on_axis & np.isfinite(zs.real)
        if self is Support.HALF_LINE:
            return on_axis & (zs.real >= 0.0)
        return on_axis & (zs.real >= 0.0) & (zs.real <= 1.0)

    @property
    def is_real(self) -> bool:
        """Whether points live on the real axis (potentials take real args)."""
        return self in (Support.REAL_LINE, Support.HALF_LINE, Support.UNIT_SEGMENT)

    @property
    def is_bounded(self) -> bool:
        return self in (Support.UNIT_SEGMENT, Support.UNIT_CIRCLE)

    @property
    def solver_allowed(self) -> bool:
        """Only the full line and plane are accepted by equilibrium solvers."""
        return self in (Support.REAL_LINE, Support.COMPLEX_PLANE)

    def probe_rays(self) -> np.ndarray:
        """Unit directions along which the growth heuristic probes."""
        if self is Support.COMPLEX_PLANE:
            angles = np.arange(8) * (np.pi / 4.0)
            return np.exp(1j * angles)
        if self is Support.REAL_LINE:
            return np.array([1.0 + 0j, -1.0 + 0j])
        if self is Support.HALF_LINE:
            return np.array([1.0 + 0j])
        return np.array([], dtype=complex)  # bounded supports: nothing to probe


@dataclass(frozen=True)
class PotentialSpec:
    """A named external potential with growth metadata.

    ``evaluate`` maps a point of the support to a real value (or +inf);
    it receives a float for real-axis supports and a complex number
    otherwise, and must accept numpy arrays of the same kind.

    ``beta_prime`` is the user-declared growth witness: the gas is
    weak-growth admissible at inverse temperature beta iff beta_prime
    exists, beta_prime > 1 and beta_prime >= beta.

    ``v_infinity`` is the declared value of the compactified potential at
    the north pole (for the built-ins, the exact value at beta = 2).
    Potentials of the structured family

        V(x) = poly(s) + log_coeff * log(1 + |x|^2),   s = x or |x|^2,

    carry their structure in ``poly``/``poly_var``/``log_coeff``, from
    which the pole value is computed exactly for any beta.
    """

    name: str
    evaluate: Callable
    beta_prime: float | None = None
    v_infinity: float | None = None
    gradient: Callable | None = None
    poly: tuple[float, ...] | None = None
    poly_var: str = "r2"  # "r2": polynomial in |x|^2; "x": polynomial in x
    log_coeff: float = 0.0

    @property
    def is_even(self) -> bool | None:
        """True/False if parity is known from the structure, else None."""
        if self.poly is None:
            return None
        if self.poly_var == "r2":
            return True
        return all(c == 0.0 for c in self.poly[1::2])

    def pole_value(self, beta: float, support: Support) -> float | None:
        """Exact liminf of V(x) - (beta/2) log(1+|x|^2) when computable.

        Returns the declared ``v_infinity`` when the structure is unknown,
        or None when neither is available.
        """
        if self.poly is not None:
            return _structured_pole_value(
                self.poly, self.poly_var, self.log_coeff, beta, support
            )
        return self.v_infinity


def _poly_end_limit(coeffs: Sequence[float], sign: float) -> float:
    """Limit of a polynomial (coeffs low->high) as its variable -> sign*inf."""
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0.0:
        trimmed.pop()
    if len(trimmed) <= 1:
        return trimmed[0] if trimmed else 0.0
    lead = trimmed[-1] * (sign ** (len(trimmed) - 1))
    return math.inf if lead > 0 else -math.inf


def _structured_pole_value(poly, poly_var, log_coeff, beta, support) -> float:
    # Polynomial growth dominates the logarithm, so a nonconstant poly part
    # decides the liminf by itself; otherwise the sign of the effective log
    # coefficient does.
    if poly_var == "r2":
        poly_lim = _poly_end_limit(poly, +1.0)
    else:
        ends = [_poly_end_limit(poly, +1.0)]
        if support is not Support.HALF_LINE:
            ends.append(_poly_end_limit(poly, -1.0))
        poly_lim = min(ends)
    if math.isinf(poly_lim):
        return poly_lim
    c_eff = log_coeff - beta / 2.0
    if c_eff > 0:
        return math.inf
    if c_eff < 0:
        return -math.inf
    return poly_lim


def _cauchy_eval(x):
    return np.log1p(np.square(x))


def _cauchy_grad(x):
    return 2.0 * x / (1.0 + np.square(x))


def _spherical_eval(x):
    return np.log1p(np.abs(x) ** 2)


def _spherical_grad(x):
    return 2.0 * x / (1.0 + np.abs(x) ** 2)


def _quadratic_eval(x):
    return np.square(x)


def _quadratic_grad(x):
    return 2.0 * x


def cauchy_potential() -> PotentialSpec:
    """V(x) = log(1 + x^2) on the real line."""
    return PotentialSpec(
        name="cauchy",
        evaluate=_cauchy_eval,
        beta_prime=2.0,
        v_infinity=0.0,
        gradient=_cauchy_grad,
        poly=(),
        poly_var="r2",
        log_coeff=1.0,
    )


def spherical_potential() -> PotentialSpec:
    """V(x) = log(1 + |x|^2) on the complex plane."""
    return PotentialSpec(
        name="spherical",
        evaluate=_spherical_eval,
        beta_prime=2.0,
        v_infinity=0.0,
        gradient=_spherical_grad,
        poly=(),
        poly_var="r2",
        log_coeff=1.0,
    )


def quadratic_potential() -> PotentialSpec:
    """V(x) = x^2 on the real line."""
    return PotentialSpec(
        name="quadratic",
        evaluate=_quadratic_eval,
        beta_prime=2.0,
        v_infinity=math.inf,
        gradient=_quadratic_grad,
        poly=(0.0, 1.0),
        poly_var="r2",
        log_coeff=0.0,
    )


BUILTIN_POTENTIALS = {
    "cauchy": cauchy_potential,
    "spherical": spherical_potential,
    "quadratic": quadratic_potential,
}


def custom_potential(
    name: str,
    poly: Sequence[float],
    poly_var: str = "r2",
    log_coeff: float = 0.0,
    beta_prime: float | None = None,
    v_infinity: float | None = None,
) -> PotentialSpec:
    """Potential from the structured family poly(s) + c*log(1+|x|^2).

    ``poly`` lists coefficients from degree 0 upward in the variable
    ``poly_var`` ("x" for the point itself on real supports, "r2" for
    |x|^2).  Evaluation and gradient are generated from the structure.
    """
    if poly_var not in ("x", "r2"):
        raise ValueError(f"poly_var must be 'x' or 'r2', got {poly_var!r}")
    coeffs = tuple(float(c) for c in poly)
    high_to_low = coeffs[::-1] if coeffs else (0.0,)

    def evaluate(x):
        s = np.square(np.abs(x)) if poly_var == "r2" else x
        out = np.polyval(high_to_low, s)
        if log_coeff != 0.0:
            out = out + log_coeff * np.log1p(np.abs(x) ** 2)
        return out

    dcoeffs = np.polyder(np.array(high_to_low)) if len(high_to_low) > 1 else np.array([0.0])

    def gradient(x):
        if poly_var == "r2":
            s = np.square(np.abs(x))
            out = np.polyval(dcoeffs, s) * 2.0 * x
        else:
            out = np.polyval(dcoeffs, x)
        if log_coeff != 0.0:
            out = out + log_coeff * 2.0 * x / (1.0 + np.abs(x) ** 2)
        return out

    return PotentialSpec(
        name=name,
        evaluate=evaluate,
        beta_prime=beta_prime,
        v_infinity=v_infinity,
        gradient=gradient,
        poly=coeffs,
        poly_var=poly_var,
        log_coeff=float(log_coeff),
    )


@dataclass(frozen=True)
class GasModel:
    """A Coulomb gas: support, inverse temperature, potential, particle count."""

    support: Support
    beta: float
    potential: PotentialSpec
    n: int

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    @property
    def weak_growth_ok(self) -> bool:
        """Declared weak-growth admissibility: beta_prime > 1 and >= beta."""
        bp = self.potential.beta_prime
        return bp is not None and bp > 1.0 and bp >= self.beta

    def potential_values(self, points) -> np.ndarray:
        """Evaluate V at points of the support (arrays accepted)."""
        pts = np.asarray(points, dtype=complex)
        arg = pts.real if self.support.is_real else pts
        return np.asarray(self.potential.evaluate(arg), dtype=float)

    def potential_gradient(self, points) -> np.ndarray:
        if self.potential.gradient is None:
            raise ValueError(f"potential {self.potential.name!r} has no gradient")
        pts = np.asarray(points, dtype=complex)
        arg = pts.real if self.support.is_real else pts
        return np.asarray(self.potential.gradient(arg), dtype=complex)


@dataclass(frozen=True)
class Configuration:
    """An ordered tuple of particle positions (complex values)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def validate_configuration(config: Configuration, model: GasModel) -> None:
    """Raise ValueError unless config has n points, all in the support."""
    if len(config) != model.n:
        raise ValueError(f"configuration has {len(config)} points, model expects {model.n}")
    ok = model.support.contains_array(config.points)
    if not np.all(ok):
        bad = config.points[~ok][0]
        raise ValueError(f"point {bad} is not in support {model.support.value}")


@dataclass(frozen=True)
class DiscreteMeasure:
    """A probability measure with finitely many weighted atoms.

    Atoms live either in the plane (complex positions) or on the Riemann
    sphere (rows of 3-vectors); duplicated positions are merged at
    construction with their weights summed, and weights must be
    nonnegative and sum to 1 within 1e-12.
    """

    positions: np.ndarray
    weights: np.ndarray
    side: str = "plane"

    def __post_init__(self):
        if self.side not in ("plane", "sphere"):
            raise ValueError(f"side must be 'plane' or 'sphere', got {self.side!r}")
        if self.side == "plane":
            pos = np.atleast_1d(np.asarray(self.positions, dtype=complex))
        else:
            pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
            if pos.shape[1] != 3:
                raise ValueError("sphere-side positions must be (n, 3)")
        wts = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if len(wts) != len(pos):
            raise ValueError("positions and weights differ in length")
        if np.any(wts < 0):
            raise ValueError("weights must be nonnegative")
        total = math.fsum(wts.tolist())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, expected 1 within 1e-12")
        pos, wts = _merge_duplicate_atoms(pos, wts, self.side)
        pos.setflags(write=False)
        wts.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", wts)

    def __len__(self) -> int:
        return len(self.weights)

    @classmethod
    def from_atoms(cls, atoms) -> "DiscreteMeasure":
        """Build from (position, weight) pairs; positions complex or SpherePoint."""
        positions = [a[0] for a in atoms]
        weights = [a[1] for a in atoms]
        if positions and hasattr(positions[0], "as_array"):
            pos = np.array([p.as_array() for p in positions], dtype=float)
            return cls(pos, np.array(weights), side="sphere")
        return cls(np.array(positions, dtype=complex), np.array(weights), side="plane")


def _merge_duplicate_atoms(pos, wts, side):
    keys: dict = {}
    order = []
    merged: list[float] = []
    for i in range(len(wts)):
        key = complex(pos[i]) if side == "plane" else tuple(pos[i])
        j = keys.get(key)
        if j is None:
            keys[key] = len(order)
            order.append(i)
            merged.append(wts[i])
        else:
            merged[j] += wts[i]
    out_pos = pos[np.array(order)] if len(order) != len(wts) else pos.copy()
    return out_pos, np.array(merged, dtype=float)


def empirical_measure(config: Configuration) -> DiscreteMeasure:
    """Mass 1/n at each particle, duplicate positions merged exactly.

    Weights are accumulated as rationals k/n (so they sum to 1 exactly)
    before conversion to floating point.
    """
    n = len(config)
    counts: dict[complex, int] = {}
    order: list[complex] = []
    for p in config.points:
        key = complex(p)
        if key not in counts:
            counts[key] = 0
            order.append(key)
        counts[key] += 1
    fractions = [Fraction(counts[p], n) for p in order]
    assert sum(fractions) == 1
    return DiscreteMeasure(
        np.array(order, dtype=complex),
        np.array([float(f) for f in fractions]),
        side="plane",
    )


class Admissibility(enum.Enum):
    STRONG = "strong"
    WEAK_ONLY = "weak_only"
    INADMISSIBLE = "inadmissible"


@dataclass(frozen=True)
class AdmissibilityReport:
    """Heuristic growth classification plus the probe values behind it."""

    classification: Admissibility
    radii: np.ndarray = field(default_factory=lambda: np.array([]))
    ratio_min: np.ndarray = field(default_factory=lambda: np.array([]))
    gap_min: np.ndarray = field(default_factory=lambda: np.array([]))
    note: str = ""


def admissibility_check(model: GasModel) -> AdmissibilityReport:
    """Classify the growth of V against beta_prime * log|x| on dyadic probes.

    Strong: V(x)/(beta' log|x|) stays above 1 at every probe (with 1e-9
    slack; at the largest radii a ratio tending to 1 sits within an ulp
    of it either way).
    Inadmissible: V(x) - beta' log|x| is strictly decreasing across the
    last 8 probe scales and clearly diverging (drops below -50 or by more
    than 3 across those scales).
    WeakOnly: everything else.

    The result is diagnostic only; it never gates computation (gating
    uses the declared weak-growth flag on the model).  Bounded supports
    are vacuously Strong.
    """
    bp = model.potential.beta_prime
    if bp is None:
        raise MissingBetaPrime(f"potential {model.potential.name!r} declares no beta_prime")
    if model.support.is_bounded:
        return AdmissibilityReport(
            Admissibility.STRONG, note="bounded support: growth condition vacuous"
        )

    rays = model.support.probe_rays()
    radii = np.array([2.0**k for k in PROBE_EXPONENTS])
    points = radii[:, None] * rays[None, :]
    values = model.potential_values(points.ravel()).reshape(points.shape)
    log_r = np.log(radii)[:, None]
    ratio = values / (bp * log_r)
    gap = values - bp * log_r

    ratio_min = ratio.min(axis=1)
    gap_min = gap.min(axis=1)

    if np.min(ratio_min) > 1.0 + 1e-9:
        cls = Admissibility.STRONG
    else:
        tail = gap_min[-8:]
        decreasing = bool(np.all(np.diff(tail) < 0))
        diverging = tail[-1] <= -50.0 or (tail[-1] - tail[0]) <= -3.0
        cls = Admissibility.INADMISSIBLE if (decreasing and diverging) else Admissibility.WEAK_ONLY
    return AdmissibilityReport(cls, radii=radii, ratio_min=ratio_min, gap_min=gap_min)
