import math

import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from flowdyn.cylindrical_sample import CylindricalSample
from flowdyn.exceptions import NumericalDegeneracyError, ValueError
from flowdyn.sw_component import SwComponent, regularize_covariance
from flowdyn.sw_gmm import (
    SwGmm,
    direction_bin_mass,
    marginal_direction_density,
    mixture_density,
    sw_gaussian_density,
)


def random_model(rng: np.random.Generator) -> SwGmm:
    k = int(rng.integers(1, 6))
    weights = rng.dirichlet(np.ones(k))
    components = []
    for w in weights:
        s_tt = rng.uniform(0.005, 1.0)
        s_rr = rng.uniform(0.005, 0.3)
        s_tr = rng.uniform(-0.9, 0.9) * math.sqrt(s_tt * s_rr)
        components.append(
            SwComponent(
                w,
                rng.uniform(-math.pi, math.pi),
                rng.uniform(0.5, 2.0),
                [[s_tt, s_tr], [s_tr, s_rr]],
            )
        )
    return SwGmm(components, winding=1)


class TestSwComponent:
    def test_init(self):
        c = SwComponent(0.5, 3 * math.pi / 2, 1.0, np.eye(2))
        assert c.mu_theta == pytest.approx(-math.pi / 2)
        np.testing.assert_allclose(c.sigma_inv, np.eye(2))
        assert c.log_norm == pytest.approx(-math.log(2 * math.pi))

    @pytest.mark.parametrize("weight", [0.0, -0.1, 1.5])
    def test_invalid_weight_raise(self, weight):
        with pytest.raises(ValueError, match="weight must be in"):
            SwComponent(weight, 0.0, 1.0, np.eye(2))

    def test_invalid_sigma_raise(self):
        with pytest.raises(ValueError, match="2x2"):
            SwComponent(1.0, 0.0, 1.0, np.eye(3))
        with pytest.raises(ValueError, match="symmetric"):
            SwComponent(1.0, 0.0, 1.0, [[1.0, 0.5], [0.1, 1.0]])
        with pytest.raises(NumericalDegeneracyError):
            SwComponent(1.0, 0.0, 1.0, [[1.0, 1.0], [1.0, 1.0]])

    def test_regularize_covariance(self):
        sigma, clamped = regularize_covariance(np.zeros((2, 2)), 1e-4, 1e-3)
        np.testing.assert_array_equal(sigma, np.diag([1e-4, 1e-4]))
        assert clamped
        sigma, clamped = regularize_covariance(np.array([[1.0, 2.0], [2.0, 1.0]]), 1e-4, 1e-3)
        assert sigma[0, 1] == pytest.approx(0.999)
        assert clamped
        sigma, clamped = regularize_covariance(np.array([[1.0, 0.2], [0.2, 1.0]]), 1e-4, 1e-3)
        assert not clamped
        np.linalg.cholesky(sigma)

    def test_dict(self):
        c = SwComponent(0.25, 0.5, 1.2, [[0.1, 0.01], [0.01, 0.05]])
        assert SwComponent.from_dict(c.to_dict()) == c
        assert c != "BAD TYPE"


class TestSwGmm:
    def test_invalid_raise(self):
        c = SwComponent(0.5, 0.0, 1.0, np.eye(2))
        with pytest.raises(ValueError, match="at least one component"):
            SwGmm([])
        with pytest.raises(ValueError, match="sum to 1"):
            SwGmm([c])
        with pytest.raises(ValueError, match="winding"):
            SwGmm([c, c], winding=-1)

    def test_peak_of_standard_gaussian(self):
        c = SwComponent(1.0, 0.0, 1.0, np.eye(2))
        z = CylindricalSample(0.0, 1.0)
        assert sw_gaussian_density(z, c, 0) == pytest.approx(1 / (2 * math.pi))

    def test_density_measures_shortest_arc(self):
        c = SwComponent(1.0, math.pi - 0.05, 1.0, np.diag([0.01, 0.01]))
        across = CylindricalSample(-math.pi + 0.05, 1.0)
        inside = CylindricalSample(math.pi - 0.15, 1.0)
        for winding in (0, 1, 2):
            assert sw_gaussian_density(across, c, winding) == pytest.approx(
                sw_gaussian_density(inside, c, winding), rel=1e-9
            )

    @pytest.mark.parametrize("winding", [0, 1, 2])
    def test_density_rotation_equivariant(self, winding):
        rng = np.random.default_rng(7)
        theta = rng.uniform(-math.pi, math.pi, 50)
        rho = rng.uniform(0.0, 2.0, 50)
        wide = [[2.5, 0.1], [0.1, 0.2]]
        for mu in (0.0, 2.9, -3.1):
            for shift in (1.4, -2.2, math.pi):
                c = SwComponent(1.0, mu, 1.0, wide)
                c_r = SwComponent(1.0, mu + shift, 1.0, wide)
                np.testing.assert_allclose(
                    SwGmm([c_r], winding).density(theta + shift, rho),
                    SwGmm([c], winding).density(theta, rho),
                    rtol=1e-9,
                )
                np.testing.assert_allclose(
                    SwGmm([c_r], winding).marginal_direction_density(theta + shift),
                    SwGmm([c], winding).marginal_direction_density(theta),
                    rtol=1e-9,
                )

    def test_bin_masses_rotate_with_the_mean(self):
        wide = [[2.5, 0.0], [0.0, 0.2]]
        step = 2 * math.pi / 8
        for winding in (0, 1):
            base = SwGmm([SwComponent(1.0, 0.1, 1.0, wide)], winding).bin_masses(8)
            for turns in range(1, 8):
                rotated = SwGmm(
                    [SwComponent(1.0, 0.1 + turns * step, 1.0, wide)], winding
                ).bin_masses(8)
                np.testing.assert_allclose(rotated, np.roll(base, turns), atol=1e-12)

    def test_symmetric(self):
        c = SwComponent(1.0, 0.0, 1.0, np.diag([0.2, 0.1]))
        assert sw_gaussian_density(CylindricalSample(0.3, 1.0), c, 1) == pytest.approx(
            sw_gaussian_density(CylindricalSample(-0.3, 1.0), c, 1)
        )

    def test_negative_winding_raise(self):
        c = SwComponent(1.0, 0.0, 1.0, np.eye(2))
        with pytest.raises(ValueError):
            sw_gaussian_density(CylindricalSample(0.0, 1.0), c, -1)

    def test_mixture_density(self):
        a = SwComponent(1.0, 0.5, 1.0, np.diag([0.1, 0.1]))
        b = SwComponent(1.0, -1.0, 1.5, np.diag([0.2, 0.05]))
        z = CylindricalSample(0.2, 1.1)
        assert mixture_density(z, SwGmm([a])) == pytest.approx(sw_gaussian_density(z, a, 1))
        mix = SwGmm([a.with_weight(0.5), b.with_weight(0.5)])
        assert mixture_density(z, mix) == pytest.approx(
            0.5 * (sw_gaussian_density(z, a, 1) + sw_gaussian_density(z, b, 1))
        )

    def test_mixture_integrates_to_one(self):
        model = SwGmm(
            [
                SwComponent(0.6, 2.8, 1.2, [[0.3, 0.02], [0.02, 0.04]]),
                SwComponent(0.4, -0.5, 0.8, [[0.1, 0.0], [0.0, 0.02]]),
            ]
        )
        theta = np.linspace(-math.pi, math.pi, 721)
        rho = np.linspace(0.0, 3.0, 601)
        tt, rr = np.meshgrid(theta, rho, indexing="ij")
        density = model.density(tt.ravel(), rr.ravel()).reshape(tt.shape)
        integral = trapezoid(trapezoid(density, rho, axis=1), theta)
        assert integral == pytest.approx(1.0, abs=1e-2)

    def test_marginal_direction_density(self):
        model = SwGmm([SwComponent(1.0, 0.0, 1.0, np.diag([0.04, 0.01]))])
        assert marginal_direction_density(0.0, model) == pytest.approx(
            1 / math.sqrt(2 * math.pi * 0.04), rel=1e-12
        )
        assert marginal_direction_density(0.7, model) == pytest.approx(
            marginal_direction_density(0.7 + 2 * math.pi, model)
        )

    def test_direction_bin_mass(self):
        tight = SwGmm([SwComponent(1.0, math.pi / 8 + 0.01, 1.0, np.diag([1e-6, 0.01]))])
        masses = [direction_bin_mass(b, 8, tight) for b in range(8)]
        assert masses[4] == pytest.approx(1.0, abs=1e-9)
        assert sum(masses) == pytest.approx(1.0, abs=1e-9)
        assert direction_bin_mass(0, 1, tight) == pytest.approx(1.0, abs=1e-6)
        with pytest.raises(ValueError):
            direction_bin_mass(8, 8, tight)

    def test_normalization_suite(self):
        rng = np.random.default_rng(100)
        for _ in range(100):
            model = random_model(rng)
            integral, _ = quad(
                lambda t: float(model.marginal_direction_density(t)[0]),
                -math.pi,
                math.pi,
                limit=200,
            )
            assert integral == pytest.approx(1.0, abs=1e-3)
            assert model.bin_masses(8).sum() == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("bins", [1, 8, 36])
    def test_bin_masses_integrate_the_marginal(self, bins):
        rng = np.random.default_rng(bins)
        width = 2 * math.pi / bins
        for _ in range(20):
            model = random_model(rng)
            for b, mass in enumerate(model.bin_masses(bins)):
                lower = -math.pi + b * width
                integral, _ = quad(
                    lambda t: float(model.marginal_direction_density(t)[0]),
                    lower,
                    lower + width,
                    limit=200,
                )
                assert mass == pytest.approx(integral, abs=1e-7)

    def test_sample(self, rng):
        model = SwGmm([SwComponent(1.0, 0.5, 1.0, np.diag([0.01, 0.01]))])
        samples = model.sample(500, rng)
        assert len(samples) == 500
        assert all(-math.pi <= z.theta < math.pi and z.rho >= 0 for z in samples)
        assert np.mean([z.theta for z in samples]) == pytest.approx(0.5, abs=0.05)
        assert model.mean_speed() == 1.0

    def test_dict(self):
        model = SwGmm(
            [
                SwComponent(0.3, 0.1, 1.0, np.diag([0.1, 0.1])),
                SwComponent(0.7, -2.0, 1.4, [[0.2, 0.01], [0.01, 0.1]]),
            ],
            winding=2,
            sample_count_at_fit=42,
        )
        restored = SwGmm.from_dict(model.to_dict())
        assert restored == model
        assert restored.k == 2
        assert model != "BAD TYPE"
