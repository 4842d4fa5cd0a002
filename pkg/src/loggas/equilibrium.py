"""Limiting measures: closed forms, grid minimization, and optimality checks.

For the two beta = 2 reference models the limiting measure is known in
closed form (a Cauchy law on the line, a heavy-tailed radial law on the
plane; their sphere-side push-forwards are the uniform measures on the
meridian circle and on the whole sphere).  For everything else a convex
discrete energy is minimized over probability weights on a grid.

The discrete objective is E(w) = w^T Q w with Q the pair kernel matrix,
off-diagonal entries the weighted log kernel and diagonal entries the
spacing-regularized self energy.  E is convex on the simplex; iterates
use an accelerated projected-gradient scheme kept monotone by fallback,
and the stopping certificate is the standard linear-minimization duality
gap  max_s <grad, w - s> = <grad, w> - min_a grad_a,  which bounds the
suboptimality E(w) - E*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .energy import DiagonalPolicy, log_density, measure_energy
from .errors import (
    CoincidentPoints,
    InadmissibleModel,
    NoClosedForm,
    QuadratureFailure,
)
from .model import Configuration, DiscreteMeasure, GasModel, Support, validate_configuration


@dataclass(frozen=True)
class ClosedFormLaw:
    """A limiting law with a density and a one-dimensional CDF reduction.

    ``variable`` names the reduction the CDF applies to: "x" for a real
    coordinate, "r" for the modulus, "angle" for the position angle on
    the meridian circle, "height" for the third sphere coordinate.
    """

    name: str
    density: Callable
    cdf: Callable
    variable: str


def cauchy_law() -> ClosedFormLaw:
    return ClosedFormLaw(
        name="cauchy",
        density=lambda x: 1.0 / (np.pi * (1.0 + np.square(x))),
        cdf=lambda x: 0.5 + np.arctan(x) / np.pi,
        variable="x",
    )


def spherical_law() -> ClosedFormLaw:
    """Area density 1/(pi (1+|z|^2)^2) on the plane; CDF is radial."""
    return ClosedFormLaw(
        name="spherical",
        density=lambda z: 1.0 / (np.pi * np.square(1.0 + np.abs(z) ** 2)),
        cdf=lambda r: np.square(r) / (1.0 + np.square(r)),
        variable="r",
    )


def circle_uniform_law() -> ClosedFormLaw:
    """Uniform measure on the meridian circle, parameterized by angle in [0, 2pi)."""
    return ClosedFormLaw(
        name="circle_uniform",
        density=lambda a: np.full_like(np.asarray(a, dtype=float), 1.0 / (2.0 * np.pi)),
        cdf=lambda a: np.asarray(a, dtype=float) / (2.0 * np.pi),
        variable="angle",
    )


def sphere_uniform_law() -> ClosedFormLaw:
    """Uniform measure on the sphere; the height coordinate is uniform on [0, 1]."""
    return ClosedFormLaw(
        name="sphere_uniform",
        density=lambda z: np.full_like(np.asarray(z, dtype=float), 1.0 / np.pi),
        cdf=lambda t: np.clip(np.asarray(t, dtype=float), 0.0, 1.0),
        variable="height",
    )


def _is_beta_two(model: GasModel) -> bool:
    return abs(model.beta - 2.0) <= 1e-12


def closed_form(model: GasModel, side: str = "plane") -> ClosedFormLaw:
    """The known limiting law of a built-in model, or NoClosedForm."""
    name = model.potential.name
    if name == "cauchy" and model.support is Support.REAL_LINE and _is_beta_two(model):
        return cauchy_law() if side == "plane" else circle_uniform_law()
    if name == "spherical" and model.support is Support.COMPLEX_PLANE and _is_beta_two(model):
        return spherical_law() if side == "plane" else sphere_uniform_law()
    raise NoClosedForm(f"no closed-form limit for ({name}, beta={model.beta})")


# Converged reference energies of the two closed-form models: the log
# energy of the uniform measure on a circle of radius 1/2 and on the
# sphere of radius 1/2.
REFERENCE_ENERGIES = {"cauchy": math.log(2.0), "spherical": 0.5}


def reference_energy(model: GasModel) -> float | None:
    try:
        law = closed_form(model)
    except NoClosedForm:
        return None
    return REFERENCE_ENERGIES[law.name]


@dataclass(frozen=True)
class GridSpec:
    """A discretization window and per-axis atom count.

    ``window`` is (lo, hi) on the line or ((xlo, xhi), (ylo, yhi)) on the
    plane (square windows only); atoms sit at cell centers.
    """

    window: tuple
    resolution: int

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("resolution must be at least 16")

    @property
    def is_planar(self) -> bool:
        return hasattr(self.window[0], "__len__")

    def atoms(self) -> tuple[np.ndarray, float]:
        """Cell-center positions (complex array) and the cell spacing."""
        m = self.resolution
        if not self.is_planar:
            lo, hi = self.window
            h = (hi - lo) / m
            xs = lo + (np.arange(m) + 0.5) * h
            return xs.astype(complex), h
        (xlo, xhi), (ylo, yhi) = self.window
        hx = (xhi - xlo) / m
        hy = (yhi - ylo) / m
        if abs(hx - hy) > 1e-12 * max(abs(hx), abs(hy)):
            raise ValueError("planar windows must be square")
        xs = xlo + (np.arange(m) + 0.5) * hx
        ys = ylo + (np.arange(m) + 0.5) * hy
        grid = xs[None, :] + 1j * ys[:, None]
        return grid.ravel(), hx


def _check_window_symmetry(model: GasModel, grid: GridSpec) -> None:
    if model.potential.is_even is not True:
        return
    if grid.is_planar:
        spans = grid.window
    else:
        spans = (grid.window,)
    for lo, hi in spans:
        if abs(lo + hi) > 1e-9 * max(abs(lo), abs(hi), 1.0):
            raise ValueError("window must be symmetric about 0 for an even potential")


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(v) + 1)
    rho = idx[u - css / idx > 0][-1]
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def _kernel_matrix(model: GasModel, atoms: np.ndarray, h: float) -> np.ndarray:
    dist = np.abs(atoms[:, None] - atoms[None, :])
    np.fill_diagonal(dist, h / 2.0)
    v = model.potential_values(atoms)
    return -(model.beta / 2.0) * np.log(dist) + 0.5 * (v[:, None] + v[None, :])


def _spectral_norm(q: np.ndarray, iters: int = 80) -> float:
    rng = np.random.default_rng(0)
    v = rng.standard_normal(len(q))
    v /= np.linalg.norm(v)
    lam = 1.0
    for _ in range(iters):
        w = q @ v
        lam = np.linalg.norm(w)
        if lam == 0.0:
            return 1.0
        v = w / lam
    return lam


@dataclass(frozen=True)
class GridMinimizeReport:
    energy: float
    gap: float
    iterations: int
    captured_mass: float | None
    converged: bool

    def to_json(self) -> dict:
        return {
            "energy": self.energy,
            "gap": self.gap,
            "iterations": self.iterations,
            "captured_mass": self.captured_mass,
            "converged": self.converged,
        }


def captured_mass(model: GasModel, grid: GridSpec) -> float | None:
    """Closed-form mass inside the grid window, when a closed form exists."""
    try:
        law = closed_form(model)
    except NoClosedForm:
        return None
    if law.variable == "x":
        lo, hi = grid.window
        return float(law.cdf(hi) - law.cdf(lo))
    (xlo, xhi), (ylo, yhi) = grid.window
    val, _ = integrate.dblquad(
        lambda y, x: 1.0 / (np.pi * (1.0 + x * x + y * y) ** 2),
        xlo, xhi, ylo, yhi, epsabs=1e-10,
    )
    return float(val)


def grid_minimize(
    model: GasModel,
    grid: GridSpec,
    tol: float = 1e-5,
    max_iter: int = 20000,
    init_weights: np.ndarray | None = None,
    on_iterate=None,
) -> tuple[DiscreteMeasure, GridMinimizeReport]:
    """Minimize the regularized discrete energy over weights on the grid.

    Returns the minimizing measure and a report with the final energy,
    duality gap, iteration count, and the closed-form mass captured by
    the window (None when no closed form exists).  If the gap is still
    above tol at max_iter the best iterate is returned flagged
    (converged=False).  ``on_iterate(k, energy, gap)``, when given, is
    called once per iteration with the monotone objective value and the
    certificate gap.
    """
    if not model.support.solver_allowed:
        raise InadmissibleModel("the solver accepts only the real line and the plane")
    if not model.weak_growth_ok:
        raise InadmissibleModel("model fails weak-growth admissibility")
    if grid.is_planar != (model.support is Support.COMPLEX_PLANE):
        raise ValueError("grid dimensionality does not match the support")
    _check_window_symmetry(model, grid)

    atoms, h = grid.atoms()
    q = _kernel_matrix(model, atoms, h)
    size = len(atoms)
    step = 1.0 / (2.0 * _spectral_norm(q) * 1.05)

    if init_weights is None:
        w = np.full(size, 1.0 / size)
    else:
        w = project_to_simplex(np.asarray(init_weights, dtype=float))
    qw = q @ w
    energy_w = float(w @ qw)

    best_w, best_gap = w, math.inf
    y = w.copy()
    w_prev = w.copy()
    t = 1.0
    iterations = 0
    converged = False
    for k in range(1, max_iter + 1):
        iterations = k
        z = project_to_simplex(y - step * 2.0 * (q @ y))
        qz = q @ z
        energy_z = float(z @ qz)
        if energy_z <= energy_w:
            w_new, q_new, energy_new = z, qz, energy_z
        else:
            # Monotone fallback: plain projected-gradient step from w.
            w_new = project_to_simplex(w - step * 2.0 * qw)
            q_new = q @ w_new
            energy_new = float(w_new @ q_new)
            t = 1.0
        grad = 2.0 * q_new
        gap = float(grad @ w_new - grad.min())
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        y = z + (t / t_next) * (w_new - z) + ((t - 1.0) / t_next) * (w_new - w_prev)
        w_prev, w, qw, energy_w = w, w_new, q_new, energy_new
        t = t_next
        if on_iterate is not None:
            on_iterate(k, energy_w, gap)
        if gap < best_gap:
            best_w, best_gap = w, gap
        if gap < tol:
            converged = True
            break

    weights = best_w / math.fsum(best_w.tolist())
    measure = DiscreteMeasure(atoms, weights, side="plane")
    final = measure_energy(
        measure, model, policy=DiagonalPolicy.REGULARIZED_SELF_ENERGY, spacing=h
    )
    report = GridMinimizeReport(
        energy=final.value,
        gap=best_gap,
        iterations=iterations,
        captured_mass=captured_mass(model, grid),
        converged=converged,
    )
    return measure, report


def closed_form_cell_masses(model: GasModel, grid: GridSpec) -> np.ndarray:
    """Window-renormalized closed-form mass of each grid cell.

    Used to compare solver weights against the known law: exact CDF
    differences on the line, tensor Gauss-Legendre cell integrals on the
    plane (midpoint would be visibly biased at coarse spacings).
    """
    law = closed_form(model)
    atoms, h = grid.atoms()
    if law.variable == "x":
        edges = np.concatenate([atoms.real - h / 2.0, [atoms.real[-1] + h / 2.0]])
        masses = np.diff(law.cdf(edges))
    else:
        nodes, wts = np.polynomial.legendre.leggauss(8)
        dx = nodes[None, :] * (h / 2.0)
        wx = wts * (h / 2.0)
        pts = (
            atoms[:, None, None]
            + dx[..., None, :].reshape(1, 8, 1)
            + 1j * dx.reshape(1, 1, 8)
        )
        vals = law.density(pts)
        masses = np.einsum("i,j,nij->n", wx, wx, vals)
    return masses / math.fsum(masses.tolist())


def _pairwise_gradient(points: np.ndarray, model: GasModel) -> np.ndarray:
    diff = points[:, None] - points[None, :]
    dist2 = np.abs(diff) ** 2
    np.fill_diagonal(dist2, 1.0)
    inv = diff / dist2
    np.fill_diagonal(inv, 0.0)
    return model.beta * inv.sum(axis=1) - model.n * model.potential_gradient(points)


def fekete_descent(
    model: GasModel,
    init: Configuration,
    step: float | None = None,
    max_iter: int = 2000,
    grad_tol: float = 1e-10,
) -> Configuration:
    """Gradient ascent on the Gibbs log-density with backtracking line search.

    Stops when the sup-norm of the position gradient drops to grad_tol or
    after max_iter accepted steps; the log-density never decreases across
    accepted iterations, and steps that would collide particles or leave
    the support are rejected by the line search.
    """
    validate_configuration(init, model)
    x = np.array(init.points, dtype=complex)
    if len(np.unique(x)) != len(x):
        raise CoincidentPoints("initial configuration has coincident points")
    gamma = step if step is not None else 0.1 / model.n
    ld = log_density(Configuration(x), model)

    for _ in range(max_iter):
        g = _pairwise_gradient(x, model)
        if np.max(np.abs(g)) <= grad_tol:
            break
        gnorm2 = float(np.sum(np.abs(g) ** 2))
        accepted = False
        for _ in range(60):
            x_new = x + gamma * g
            if model.support.is_real:
                x_new = x_new.real.astype(complex)
            cand = Configuration(x_new)
            if not np.all(model.support.contains_array(x_new)):
                gamma *= 0.5
                continue
            ld_new = log_density(cand, model)
            if not np.isfinite(ld_new) or ld_new < ld + 1e-4 * gamma * gnorm2:
                gamma *= 0.5
                continue
            x, ld = x_new, ld_new
            gamma *= 1.25
            accepted = True
            break
        if not accepted:
            break
    return Configuration(x)


_QUAD_OPTS = dict(limit=200, epsabs=1e-11, epsrel=1e-11)


def _quad(f, a, b, fail_tol: float, **kw):
    res = integrate.quad(f, a, b, full_output=1, **kw)
    val, abserr = res[0], res[1]
    if abserr > fail_tol:
        raise QuadratureFailure(
            f"integral on [{a}, {b}] reported error {abserr:.2e} > {fail_tol:.2e}"
        )
    return val


def _log_potential_line(law: ClosedFormLaw, x: float) -> float:
    """integral of log|x - y| against a density on the line.

    The domain splits at the singularity y = x; the two near pieces use
    the change of variables u = |y - x| so the log endpoint singularity
    sits at u = 0 where the adaptive rule handles it.
    """
    fail = 1e-7
    near_minus = _quad(lambda u: law.density(x - u) * math.log(u), 0.0, 1.0, fail, **_QUAD_OPTS)
    near_plus = _quad(lambda u: law.density(x + u) * math.log(u), 0.0, 1.0, fail, **_QUAD_OPTS)
    far_plus = _quad(
        lambda y: law.density(y) * math.log(y - x), x + 1.0, math.inf, fail, **_QUAD_OPTS
    )
    far_minus = _quad(
        lambda y: law.density(y) * math.log(x - y), -math.inf, x - 1.0, fail, **_QUAD_OPTS
    )
    return near_minus + near_plus + far_plus + far_minus


def _log_potential_radial(law: ClosedFormLaw, x: float) -> float:
    """integral of log|x - y| against a radial area density on the plane.

    Polar coordinates: the angular integral is evaluated adaptively with
    a split at the angle of closest approach, the radial integral splits
    at r = |x|.
    """
    inner_fail, outer_fail = 1e-8, 1e-6
    inner_opts = dict(limit=200, epsabs=1e-12, epsrel=1e-12)

    def angular(r: float) -> float:
        if r == 0.0:
            return 2.0 * math.pi * math.log(x) if x > 0 else -math.inf

        def f(theta):
            d2 = x * x + r * r - 2.0 * x * r * math.cos(theta)
            return 0.5 * math.log(d2)

        return _quad(f, -math.pi, math.pi, inner_fail, points=[0.0], **inner_opts)

    def radial_integrand(r: float) -> float:
        return float(law.density(complex(r))) * r * angular(r)

    pieces = []
    mid = x + 10.0
    outer_opts = dict(limit=200, epsabs=1e-9, epsrel=1e-9)
    if x > 0:
        pieces.append(_quad(radial_integrand, 0.0, x, outer_fail, **outer_opts))
        pieces.append(_quad(radial_integrand, x, mid, outer_fail, **outer_opts))
    else:
        pieces.append(_quad(radial_integrand, 0.0, mid, outer_fail, **outer_opts))
    pieces.append(_quad(radial_integrand, mid, math.inf, outer_fail, **outer_opts))
    return math.fsum(pieces)


def el_residual(
    candidate: ClosedFormLaw | DiscreteMeasure,
    model: GasModel,
    probe_points: Sequence[complex],
) -> np.ndarray:
    """Effective potential U(x) = beta * int log(1/|x-y|) dmu(y) + V(x).

    U is constant on the support of the true minimizer; the candidate is
    either a closed-form law (adaptive quadrature with singularity
    splitting) or a discrete measure (direct sum, +inf at its atoms).
    """
    probes = np.asarray(probe_points, dtype=complex)
    out = np.empty(len(probes), dtype=float)
    if isinstance(candidate, DiscreteMeasure):
        if candidate.side != "plane":
            raise ValueError("el_residual expects a plane-side measure")
        for i, x in enumerate(probes):
            sep = np.abs(x - candidate.positions)
            if np.any(sep == 0.0):
                out[i] = math.inf
                continue
            log_pot = math.fsum((candidate.weights * np.log(sep)).tolist())
            out[i] = -model.beta * log_pot + float(model.potential_values([x])[0])
        return out
    if candidate.variable == "x":
        for i, x in enumerate(probes):
            log_pot = _log_potential_line(candidate, float(x.real))
            out[i] = -model.beta * log_pot + float(model.potential_values([x])[0])
        return out
    if candidate.variable == "r":
        for i, x in enumerate(probes):
            log_pot = _log_potential_radial(candidate, abs(x))
            out[i] = -model.beta * log_pot + float(model.potential_values([x])[0])
        return out
    raise ValueError("el_residual supports plane-side laws and measures only")
