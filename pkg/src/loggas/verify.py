"""Seeded verification suites for the exact compactification identities.

Each suite draws random inputs, evaluates both sides of an identity
independently, and records the maximum deviation:

  metric    |T(x) - T(y)|_R3 vs the planar chord formula, |x|, |y| up to 1e6
  pole      1 - |T(x)|^2 vs 1/(1 + |x|^2)
  kernel    planar pair kernel vs sphere pair kernel on projected pairs
  density   Gibbs log-weight vs its sphere-side change of variables
  energy    discrete measure energy vs the energy of its push-forward

Kernel pairs are drawn at modulus <= 5 and with chordal separation at
least 1e-3: both kernels diverge at coincidence, the float error of
comparing independent evaluations scales like ulp/separation through
the log term, and like V(x) * ulp/(1 - x3) through the sphere-side
potential (the modulus of a projected point is carried by 1 - x3, so
its relative precision degrades toward the pole).
"""

from __future__ import annotations

import numpy as np

from .energy import log_density, log_density_sphere, measure_energy
from .geometry import compactified_potential, project_array, pushforward
from .model import (
    Configuration,
    DiscreteMeasure,
    GasModel,
    Support,
    cauchy_potential,
    quadratic_potential,
    spherical_potential,
)

_MODELS = {
    "cauchy": lambda n=1: GasModel(Support.REAL_LINE, 2.0, cauchy_potential(), n),
    "spherical": lambda n=1: GasModel(Support.COMPLEX_PLANE, 2.0, spherical_potential(), n),
    "quadratic": lambda n=1: GasModel(Support.REAL_LINE, 2.0, quadratic_potential(), n),
}


def _wide_complex(rng, count, max_exp=6.0):
    mags = 10.0 ** rng.uniform(-3.0, max_exp, count)
    phases = np.exp(2j * np.pi * rng.random(count))
    return mags * phases


def metric_identity_deviation(rng, count) -> float:
    xs = _wide_complex(rng, count)
    ys = _wide_complex(rng, count)
    chordal = np.abs(xs - ys) / (np.hypot(1.0, np.abs(xs)) * np.hypot(1.0, np.abs(ys)))
    diff = project_array(xs) - project_array(ys)
    euclid = np.sqrt(np.sum(diff * diff, axis=-1))
    return float(np.max(np.abs(euclid - chordal)))


def pole_identity_deviation(rng, count) -> float:
    xs = _wide_complex(rng, count)
    zs = project_array(xs)
    lhs = 1.0 - np.sum(zs * zs, axis=-1)
    rhs = 1.0 / (1.0 + np.abs(xs) ** 2)
    return float(np.max(np.abs(lhs - rhs)))


def _moderate_pairs(rng, count, real: bool):
    """Pairs with modulus <= 5 and chordal separation >= 1e-3."""
    xs = np.empty(count, dtype=complex)
    ys = np.empty(count, dtype=complex)
    filled = 0
    while filled < count:
        todo = count - filled
        mags_x = 10.0 ** rng.uniform(-2.0, 0.7, todo)
        mags_y = 10.0 ** rng.uniform(-2.0, 0.7, todo)
        if real:
            a = mags_x * rng.choice([-1.0, 1.0], todo)
            b = mags_y * rng.choice([-1.0, 1.0], todo)
        else:
            a = mags_x * np.exp(2j * np.pi * rng.random(todo))
            b = mags_y * np.exp(2j * np.pi * rng.random(todo))
        chordal = np.abs(a - b) / (np.hypot(1.0, np.abs(a)) * np.hypot(1.0, np.abs(b)))
        keep = chordal >= 1e-3
        k = int(keep.sum())
        xs[filled : filled + k] = a[keep]
        ys[filled : filled + k] = b[keep]
        filled += k
    return xs, ys


def kernel_transport_deviation(rng, count) -> float:
    worst = 0.0
    for make in _MODELS.values():
        model = make()
        real = model.support is Support.REAL_LINE
        xs, ys = _moderate_pairs(rng, count, real)
        vx = model.potential_values(xs)
        vy = model.potential_values(ys)
        planar = -(model.beta / 2.0) * np.log(np.abs(xs - ys)) + 0.5 * (vx + vy)
        pot = compactified_potential(model)
        zx = project_array(xs)
        zy = project_array(ys)
        diff = zx - zy
        d3 = np.sqrt(np.sum(diff * diff, axis=-1))
        sphere = -(model.beta / 2.0) * np.log(d3) + 0.5 * (
            pot.on_sphere_array(zx) + pot.on_sphere_array(zy)
        )
        worst = max(worst, float(np.max(np.abs(planar - sphere))))
    return worst


def _random_configuration(rng, n, real: bool) -> np.ndarray:
    while True:
        if real:
            pts = rng.standard_normal(n).astype(complex)
        else:
            pts = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        iu, ju = np.triu_indices(n, k=1)
        if np.min(np.abs(pts[iu] - pts[ju])) > 1e-6:
            return pts


def density_transport_deviation(rng, configs, n=50) -> float:
    worst = 0.0
    for make in _MODELS.values():
        model = make(n)
        real = model.support is Support.REAL_LINE
        for _ in range(configs):
            config = Configuration(_random_configuration(rng, n, real))
            lhs = log_density(config, model)
            rhs = log_density_sphere(config, model)
            worst = max(worst, abs(lhs - rhs))
    return worst


def energy_transport_deviation(rng, measures, atoms=100) -> float:
    worst = 0.0
    for make in _MODELS.values():
        model = make()
        real = model.support is Support.REAL_LINE
        for _ in range(measures):
            pts = _random_configuration(rng, atoms, real)
            w = rng.exponential(size=atoms)
            w /= w.sum()
            mu = DiscreteMeasure(pts, w, side="plane")
            plane = measure_energy(mu, model).value
            sphere = measure_energy(pushforward(mu), model).value
            worst = max(worst, abs(plane - sphere))
    return worst


SUITE_TOLERANCES = {
    "metric": 1e-12,
    "pole": 1e-12,
    "kernel_transport": 1e-12,
    "density_transport": 1e-10,
    "energy_transport": 1e-10,
}


def run_identity_suites(
    seed: int = 0, pairs: int = 100_000, configs: int = 60, measures: int = 20
) -> dict:
    """Run every identity suite; returns per-suite deviations and verdicts."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x1D]))
    deviations = {
        "metric": metric_identity_deviation(rng, pairs),
        "pole": pole_identity_deviation(rng, pairs),
        "kernel_transport": kernel_transport_deviation(rng, pairs),
        "density_transport": density_transport_deviation(rng, configs),
        "energy_transport": energy_transport_deviation(rng, measures),
    }
    suites = {}
    for name, dev in deviations.items():
        tol = SUITE_TOLERANCES[name]
        suites[name] = {"max_deviation": dev, "tolerance": tol, "pass": dev <= tol}
    return {
        "seed": int(seed),
        "pairs": int(pairs),
        "suites": suites,
        "pass": all(s["pass"] for s in suites.values()),
    }
