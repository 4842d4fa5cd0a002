"""Walk through the sphere-compactification identities on concrete numbers.

The map T sends a complex point x to the sphere of radius 1/2 sitting on
the origin; the point at infinity becomes the north pole.  Three exact
identities make the sphere side equivalent to the plane side, and this
script evaluates both sides of each on random inputs.
"""

import numpy as np

from loggas import (
    GasModel,
    Support,
    cauchy_potential,
    chordal_distance,
    compactified_potential,
    kernel_planar,
    kernel_sphere,
    log_density,
    log_density_sphere,
    Configuration,
    project,
    project_array,
    quadratic_potential,
)

rng = np.random.default_rng(0)

print("=== the projection on a few points ===")
for x in (0, 1, 1 + 1j, 100j):
    z = project(x)
    print(f"  T({x}) = ({z.x1:.6f}, {z.x2:.6f}, {z.x3:.6f})")

print()
print("=== metric identity: chord length between projections ===")
xs = rng.standard_normal(50_000) + 1j * rng.standard_normal(50_000)
ys = 10.0 * (rng.standard_normal(50_000) + 1j * rng.standard_normal(50_000))
diff = project_array(xs) - project_array(ys)
euclid = np.sqrt(np.sum(diff * diff, axis=-1))
chordal = np.abs(xs - ys) / (np.hypot(1, np.abs(xs)) * np.hypot(1, np.abs(ys)))
print(f"  |T(x)-T(y)| vs planar chord formula, 5e4 pairs: "
      f"max deviation {np.max(np.abs(euclid - chordal)):.2e}")
print(f"  chordal_distance(0, 1) = {chordal_distance(0, 1):.8f}  (= 1/sqrt(2))")
print(f"  chordal_distance(1, -1) = {chordal_distance(1, -1):.8f}  (sphere diameter)")

print()
print("=== kernel transport: pair kernels agree across the map ===")
model = GasModel(Support.REAL_LINE, 2.0, cauchy_potential(), 2)
worst = 0.0
for _ in range(2000):
    x, y = rng.standard_normal(2)
    if abs(x - y) < 1e-3:
        continue
    worst = max(worst, abs(
        kernel_planar(x, y, model) - kernel_sphere(project(x), project(y), model)
    ))
print(f"  cauchy model, 2000 random pairs: max deviation {worst:.2e}")

print()
print("=== the compactified potential ===")
pot = compactified_potential(model)
print(f"  cauchy at beta=2: V_sphere(T(3.7)) = {pot(project(3.7)):.2e}  (identically 0)")
print(f"  cauchy at beta=2: V_sphere(pole)  = {pot.pole_value}")
quad = GasModel(Support.REAL_LINE, 2.0, quadratic_potential(), 2)
pot_q = compactified_potential(quad)
print(f"  quadratic: V_sphere(T(1)) = {pot_q(project(1)):.6f}  (= 1 - log 2)")
print(f"  quadratic: V_sphere(pole) = {pot_q.pole_value}  (confinement wins)")

print()
print("=== density transport: Gibbs log-weights agree across the map ===")
for n in (2, 8, 32):
    model_n = GasModel(Support.REAL_LINE, 2.0, cauchy_potential(), n)
    config = Configuration(rng.standard_normal(n).astype(complex))
    lhs = log_density(config, model_n)
    rhs = log_density_sphere(config, model_n)
    print(f"  n={n:3d}: plane {lhs:+.12f}   sphere {rhs:+.12f}   "
          f"diff {abs(lhs - rhs):.2e}")
