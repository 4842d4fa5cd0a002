import math

import numpy as np
import pytest

from loggas import (
    POLE,
    Configuration,
    DiscreteMeasure,
    GasModel,
    InadmissibleModel,
    PoleNotInvertible,
    PotentialSpec,
    SpherePoint,
    Support,
    cauchy_potential,
    chordal_distance,
    compactified_potential,
    empirical_measure,
    project,
    project_array,
    pushforward,
    quadratic_potential,
    spherical_potential,
    unproject,
    unproject_array,
)


def wide_complex(rng, count, max_exp=6.0):
    mags = 10.0 ** rng.uniform(-3.0, max_exp, count)
    return mags * np.exp(2j * np.pi * rng.random(count))


class TestSpherePoint:
    def test_on_sphere_validation(self):
        SpherePoint(0.0, 0.0, 0.0)
        SpherePoint(0.5, 0.0, 0.5)
        with pytest.raises(ValueError):
            SpherePoint(0.3, 0.3, 0.3)

    def test_pole_is_explicit(self):
        assert POLE.pole
        assert (POLE.x1, POLE.x2, POLE.x3) == (0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            SpherePoint(0.1, 0.0, 1.0, pole=True)


class TestProject:
    def test_examples(self):
        assert project(0).as_array() == pytest.approx([0, 0, 0])
        assert project(1).as_array() == pytest.approx([0.5, 0, 0.5])
        assert project(1 + 1j).as_array() == pytest.approx([1 / 3, 1 / 3, 2 / 3])

    def test_sphere_membership_100k(self):
        rng = np.random.default_rng(1)
        zs = project_array(wide_complex(rng, 100_000))
        err = zs[:, 0] ** 2 + zs[:, 1] ** 2 + (zs[:, 2] - 0.5) ** 2 - 0.25
        assert np.max(np.abs(err)) <= 1e-12

    def test_huge_modulus_stable(self):
        z = project(1e200 + 1e200j)
        assert z.x3 == pytest.approx(1.0)
        assert np.isfinite(z.as_array()).all()

    def test_scalar_matches_array(self):
        rng = np.random.default_rng(2)
        xs = wide_complex(rng, 100)
        arr = project_array(xs)
        for x, row in zip(xs, arr):
            assert project(x).as_array() == pytest.approx(row, abs=0)


class TestUnproject:
    def test_examples(self):
        assert unproject(SpherePoint(0.0, 0.0, 0.0)) == 0
        assert unproject(SpherePoint(0.5, 0.0, 0.5)) == pytest.approx(1.0)
        with pytest.raises(PoleNotInvertible):
            unproject(POLE)

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        xs = wide_complex(rng, 10_000, max_exp=4.0)
        back = unproject_array(project_array(xs))
        assert np.max(np.abs(back - xs) / np.abs(xs)) <= 1e-12

    def test_round_trip_survives_float_pole_rounding(self):
        # at |x| = 1e200 the projected height rounds to exactly 1.0, but
        # the horizontal coordinates still carry the modulus
        x = 1e200 + 0j
        z = project(x)
        assert z.x3 == 1.0 and not z.pole
        assert unproject(z) == pytest.approx(x, rel=1e-12)

    def test_exact_pole_coordinates_rejected(self):
        with pytest.raises(PoleNotInvertible):
            unproject(SpherePoint(0.0, 0.0, 1.0))
        with pytest.raises(PoleNotInvertible):
            unproject_array(np.array([[0.0, 0.0, 1.0]]))


class TestChordalDistance:
    def test_examples(self):
        assert chordal_distance(0, 1) == pytest.approx(1 / math.sqrt(2))
        assert chordal_distance(1, -1) == pytest.approx(1.0)
        assert chordal_distance(2.7 - 1j, 2.7 - 1j) == 0.0

    def test_matches_r3_distance(self):
        rng = np.random.default_rng(4)
        xs = wide_complex(rng, 100_000)
        ys = wide_complex(rng, 100_000)
        diff = project_array(xs) - project_array(ys)
        euclid = np.sqrt(np.sum(diff * diff, axis=-1))
        chordal = np.abs(xs - ys) / (np.hypot(1, np.abs(xs)) * np.hypot(1, np.abs(ys)))
        assert np.max(np.abs(euclid - chordal)) <= 1e-12

    def test_bounded_by_diameter(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            x, y = wide_complex(rng, 2)
            assert chordal_distance(x, y) <= 1.0

    def test_pole_identity(self):
        # 1 - |T(x)|^2 = 1/(1 + |x|^2), the squared-norm relation
        rng = np.random.default_rng(6)
        xs = wide_complex(rng, 100_000)
        zs = project_array(xs)
        lhs = 1.0 - np.sum(zs * zs, axis=-1)
        rhs = 1.0 / (1.0 + np.abs(xs) ** 2)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


class TestCompactifiedPotential:
    def test_cauchy_identically_zero(self):
        model = GasModel(Support.REAL_LINE, 2.0, cauchy_potential(), 1)
        pot = compactified_potential(model)
        assert pot(POLE) == 0.0
        for x in (-5.0, 0.0, 0.3, 100.0):
            assert pot(project(x)) == pytest.approx(0.0, abs=1e-12)
        assert not pot.pole_is_estimate

    def test_spherical_identically_zero(self):
        model = GasModel(Support.COMPLEX_PLANE, 2.0, spherical_potential(), 1)
        pot = compactified_potential(model)
        assert pot(POLE) == 0.0
        for x in (0j, 1 + 1j, -3j, 40 - 7j):
            assert pot(project(x)) == pytest.approx(0.0, abs=1e-12)

    def test_quadratic_values(self):
        model = GasModel(Support.REAL_LINE, 2.0, quadratic_potential(), 1)
        pot = compactified_potential(model)
        assert pot(project(1)) == pytest.approx(1.0 - math.log(2.0))
        assert pot(POLE) == math.inf

    def test_inadmissible_model_rejected(self):
        model = GasModel(Support.REAL_LINE, 2.5, cauchy_potential(), 1)
        assert not model.weak_growth_ok
        with pytest.raises(InadmissibleModel):
            compactified_potential(model)

    def test_probe_estimate_flagged(self):
        # no structure and no declared pole value: estimate from probes
        pot_spec = PotentialSpec(
            name="opaque",
            evaluate=lambda x: np.log1p(np.square(x)),
            beta_prime=2.0,
        )
        model = GasModel(Support.REAL_LINE, 2.0, pot_spec, 1)
        pot = compactified_potential(model)
        assert pot.pole_is_estimate
        assert pot.pole_value == pytest.approx(0.0, abs=1e-9)

    def test_plane_form_matches_sphere_form(self):
        model = GasModel(Support.REAL_LINE, 2.0, quadratic_potential(), 1)
        pot = compactified_potential(model)
        xs = np.array([0.1, -2.0, 3.5], dtype=complex)
        direct = pot.on_plane(xs)
        via_sphere = pot.on_sphere_array(project_array(xs))
        assert direct == pytest.approx(via_sphere, abs=1e-12)


class TestPushforward:
    def test_single_atom(self):
        mu = DiscreteMeasure(np.array([0j]), np.array([1.0]))
        nu = pushforward(mu)
        assert nu.side == "sphere"
        assert nu.positions[0] == pytest.approx([0, 0, 0])

    def test_empirical_three_points(self):
        mu = empirical_measure(Configuration(np.array([0, 1, 1j], dtype=complex)))
        nu = pushforward(mu)
        rows = {tuple(np.round(p, 12)) for p in nu.positions}
        assert (0.0, 0.0, 0.0) in rows
        assert (0.5, 0.0, 0.5) in rows
        assert (0.0, 0.5, 0.5) in rows

    def test_weights_preserved(self):
        mu = DiscreteMeasure(np.array([0j, 1 + 0j]), np.array([0.3, 0.7]))
        nu = pushforward(mu)
        assert np.array_equal(nu.weights, mu.weights)
        assert math.fsum(nu.weights.tolist()) == pytest.approx(1.0, abs=1e-15)

    def test_mass_preserved_random(self):
        rng = np.random.default_rng(7)
        pts = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        w = rng.exponential(size=50)
        w /= w.sum()
        nu = pushforward(DiscreteMeasure(pts, w))
        assert math.fsum(nu.weights.tolist()) == pytest.approx(1.0, abs=1e-12)
