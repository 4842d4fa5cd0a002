import math

import numpy as np
import pytest

from loggas import (
    Admissibility,
    Configuration,
    DiscreteMeasure,
    GasModel,
    MissingBetaPrime,
    Support,
    admissibility_check,
    cauchy_potential,
    custom_potential,
    empirical_measure,
    quadratic_potential,
    spherical_potential,
    validate_configuration,
)


def model(potential, beta=2.0, n=1, support=Support.REAL_LINE):
    return GasModel(support, beta, potential, n)


class TestSupports:
    def test_membership(self):
        assert Support.REAL_LINE.contains(1.5)
        assert not Support.REAL_LINE.contains(1.5 + 1e-6j)
        assert Support.REAL_LINE.contains(1.5 + 1e-13j)  # axis tolerance
        assert Support.COMPLEX_PLANE.contains(3 - 2j)
        assert Support.HALF_LINE.contains(0.0)
        assert not Support.HALF_LINE.contains(-1e-3)
        assert Support.UNIT_SEGMENT.contains(1.0)
        assert not Support.UNIT_SEGMENT.contains(1.001)
        assert Support.UNIT_CIRCLE.contains(np.exp(0.3j))
        assert not Support.UNIT_CIRCLE.contains(1.01)

    def test_solver_gate(self):
        assert Support.REAL_LINE.solver_allowed
        assert Support.COMPLEX_PLANE.solver_allowed
        assert not Support.HALF_LINE.solver_allowed
        assert not Support.UNIT_CIRCLE.solver_allowed


class TestEmpiricalMeasure:
    def test_three_distinct_points(self):
        mu = empirical_measure(Configuration(np.array([0, 1, 1j], dtype=complex)))
        assert len(mu) == 3
        assert np.allclose(mu.weights, 1 / 3)

    def test_duplicates_merge(self):
        mu = empirical_measure(Configuration(np.array([1.0, 1.0], dtype=complex)))
        assert len(mu) == 1
        assert mu.weights[0] == 1.0

    def test_multiplicity(self):
        mu = empirical_measure(Configuration(np.array([-1, 0, 1, 0], dtype=complex)))
        by_pos = dict(zip(mu.positions.tolist(), mu.weights.tolist()))
        assert by_pos[-1 + 0j] == 0.25
        assert by_pos[0j] == 0.5
        assert by_pos[1 + 0j] == 0.25

    def test_weights_sum_exactly_one(self):
        # rational k/n bookkeeping keeps the float total at 1 for many n
        rng = np.random.default_rng(0)
        for n in (1, 2, 3, 7, 11, 100, 128):
            pts = rng.integers(0, max(2, n // 2), n).astype(complex)
            mu = empirical_measure(Configuration(pts))
            assert math.fsum(mu.weights.tolist()) == pytest.approx(1.0, abs=1e-15)


class TestDiscreteMeasure:
    def test_merging_and_idempotence(self):
        pos = np.array([1.0, 2.0, 1.0], dtype=complex)
        w = np.array([0.25, 0.5, 0.25])
        mu = DiscreteMeasure(pos, w)
        assert len(mu) == 2
        again = DiscreteMeasure(mu.positions, mu.weights)
        assert np.array_equal(again.positions, mu.positions)
        assert np.array_equal(again.weights, mu.weights)

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            DiscreteMeasure(np.array([0j, 1j]), np.array([0.5, 0.6]))
        with pytest.raises(ValueError):
            DiscreteMeasure(np.array([0j, 1j]), np.array([-0.1, 1.1]))

    def test_sphere_side_shape(self):
        pos = np.array([[0.0, 0.0, 0.0], [0.5, 0.0, 0.5]])
        mu = DiscreteMeasure(pos, np.array([0.3, 0.7]), side="sphere")
        assert mu.positions.shape == (2, 3)
        with pytest.raises(ValueError):
            DiscreteMeasure(np.array([[0.0, 0.0]]), np.array([1.0]), side="sphere")


class TestConfiguration:
    def test_validation(self):
        m = model(cauchy_potential(), n=2)
        validate_configuration(Configuration(np.array([0.0, 1.0], dtype=complex)), m)
        with pytest.raises(ValueError):
            validate_configuration(Configuration(np.array([0.0], dtype=complex)), m)
        with pytest.raises(ValueError):
            validate_configuration(Configuration(np.array([0.0, 1.0 + 1j], dtype=complex)), m)

    def test_points_read_only(self):
        config = Configuration(np.array([0.0, 1.0], dtype=complex))
        with pytest.raises(ValueError):
            config.points[0] = 5.0


class TestPotentials:
    def test_builtin_values(self):
        assert cauchy_potential().evaluate(1.0) == pytest.approx(math.log(2))
        assert spherical_potential().evaluate(1j) == pytest.approx(math.log(2))
        assert quadratic_potential().evaluate(3.0) == 9.0

    def test_pole_values_at_beta_two(self):
        # closed-form values of the sphere potential at the pole
        assert cauchy_potential().pole_value(2.0, Support.REAL_LINE) == 0.0
        assert spherical_potential().pole_value(2.0, Support.COMPLEX_PLANE) == 0.0
        assert quadratic_potential().pole_value(2.0, Support.REAL_LINE) == math.inf

    def test_pole_value_tracks_beta(self):
        pot = cauchy_potential()
        assert pot.pole_value(1.0, Support.REAL_LINE) == math.inf  # log coeff 1 > beta/2
        assert pot.pole_value(3.0, Support.REAL_LINE) == -math.inf

    def test_custom_structured_potential(self):
        pot = custom_potential("mix", poly=[0.0, 0.5], poly_var="r2", log_coeff=0.3,
                               beta_prime=2.0)
        x = 1.7
        assert pot.evaluate(x) == pytest.approx(0.5 * x**2 + 0.3 * math.log(1 + x**2))
        # finite differences confirm the generated gradient
        eps = 1e-6
        fd = (pot.evaluate(x + eps) - pot.evaluate(x - eps)) / (2 * eps)
        assert pot.gradient(x) == pytest.approx(fd, rel=1e-6)
        assert pot.is_even is True
        odd = custom_potential("odd", poly=[0.0, 1.0], poly_var="x")
        assert odd.is_even is False

    def test_odd_polynomial_pole_is_minus_infinity(self):
        pot = custom_potential("cubic", poly=[0.0, 0.0, 0.0, 1.0], poly_var="x")
        assert pot.pole_value(2.0, Support.REAL_LINE) == -math.inf
        # on the half-line only the +infinity end matters
        assert pot.pole_value(2.0, Support.HALF_LINE) == math.inf


class TestGasModel:
    def test_constraints(self):
        with pytest.raises(ValueError):
            model(cauchy_potential(), beta=-1.0)
        with pytest.raises(ValueError):
            model(cauchy_potential(), n=0)

    def test_weak_growth_flag(self):
        assert model(cauchy_potential(), beta=2.0).weak_growth_ok
        assert not model(cauchy_potential(), beta=2.5).weak_growth_ok  # beta' < beta
        nameless = custom_potential("bare", poly=[0.0, 1.0])
        assert not model(nameless, beta=2.0).weak_growth_ok  # no beta'


class TestAdmissibility:
    def test_quadratic_strong(self):
        # oracle: probe the ratio V/(beta' log r) directly on the dyadic grid
        radii = np.array([2.0**k for k in range(4, 41)])
        ratios = radii**2 / (2.0 * np.log(radii))
        assert ratios.min() > 1.0
        rep = admissibility_check(model(quadratic_potential()))
        assert rep.classification is Admissibility.STRONG

    def test_cauchy_weak_only(self):
        # oracle: the gap log(1+r^2) - 2 log r tends to 0 (bounded below),
        # while the ratio tends to 1 (strong test fails)
        radii = np.array([2.0**k for k in range(4, 41)])
        gap = np.log1p(radii**2) - 2.0 * np.log(radii)
        assert gap.min() > -1.0
        rep = admissibility_check(model(cauchy_potential()))
        assert rep.classification is Admissibility.WEAK_ONLY

    def test_half_log_inadmissible(self):
        # oracle: 0.5 log(1+r^2) - 2 log r drifts down like -log r, unbounded
        radii = np.array([2.0**k for k in range(4, 41)])
        gap = 0.5 * np.log1p(radii**2) - 2.0 * np.log(radii)
        assert gap[-1] - gap[-8] < -3.0
        pot = custom_potential("half_log", poly=[], poly_var="r2", log_coeff=0.5,
                               beta_prime=2.0)
        rep = admissibility_check(model(pot))
        assert rep.classification is Admissibility.INADMISSIBLE

    def test_cauchy_never_strong_for_admissible_beta_prime(self):
        # any declared beta' >= beta = 2 fails the strong ratio test
        for bp in (2.0, 2.5, 3.0, 10.0):
            pot = custom_potential("c", poly=[], poly_var="r2", log_coeff=1.0,
                                   beta_prime=bp)
            rep = admissibility_check(model(pot, beta=2.0))
            assert rep.classification is not Admissibility.STRONG

    def test_missing_beta_prime(self):
        pot = custom_potential("bare", poly=[0.0, 1.0])
        with pytest.raises(MissingBetaPrime):
            admissibility_check(model(pot))

    def test_bounded_support_vacuous(self):
        rep = admissibility_check(
            model(cauchy_potential(), support=Support.UNIT_CIRCLE)
        )
        assert rep.classification is Admissibility.STRONG
        assert "vacuous" in rep.note

    def test_witness_recorded(self):
        rep = admissibility_check(model(cauchy_potential()))
        assert len(rep.radii) == 37
        assert len(rep.ratio_min) == 37
        assert len(rep.gap_min) == 37
