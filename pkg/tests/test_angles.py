import math

import numpy as np
import pytest

from flowdyn.angles import (
    angular_diff,
    direction_bin,
    wrap_angle,
    wrap_angles,
    wrapped_normal_bin_masses,
)
from flowdyn.exceptions import ValueError


class TestAngles:
    @pytest.mark.parametrize(
        "a, expected",
        [
            (0.0, 0.0),
            (math.pi, -math.pi),
            (-math.pi, -math.pi),
            (3 * math.pi / 2, -math.pi / 2),
            (-3 * math.pi / 2, math.pi / 2),
            (4 * math.pi + 0.25, 0.25),
        ],
    )
    def test_wrap_angle(self, a, expected):
        assert wrap_angle(a) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("a", [math.inf, -math.inf, math.nan])
    def test_wrap_angle_non_finite_raise(self, a):
        with pytest.raises(ValueError, match="Angle must be finite"):
            wrap_angle(a)

    def test_wrap_angle_range_and_idempotence(self, rng):
        for a in rng.uniform(-50, 50, 2000):
            w = wrap_angle(a)
            assert -math.pi <= w < math.pi
            assert wrap_angle(w) == w
            assert abs(wrap_angle(wrap_angle(a + 2 * math.pi) - w)) < 1e-9

    def test_wrap_angles_matches_scalar(self, rng):
        a = rng.uniform(-20, 20, 500)
        np.testing.assert_allclose(wrap_angles(a), [wrap_angle(v) for v in a], atol=1e-12)
        assert wrap_angles(math.pi) == -math.pi
        with pytest.raises(ValueError):
            wrap_angles([0.0, math.nan])

    @pytest.mark.parametrize(
        "a, b, expected",
        [
            (0.1, -0.1, 0.2),
            (math.pi - 0.1, -math.pi + 0.1, -0.2),
            (1.3, 1.3, 0.0),
        ],
    )
    def test_angular_diff(self, a, b, expected):
        assert angular_diff(a, b) == pytest.approx(expected, abs=1e-12)

    def test_angular_diff_antisymmetric(self, rng):
        for a, b in rng.uniform(-math.pi, math.pi, (500, 2)):
            assert angular_diff(a, b) == pytest.approx(-angular_diff(b, a), abs=1e-12)

    def test_angular_diff_non_finite_raise(self):
        with pytest.raises(ValueError):
            angular_diff(0.0, math.nan)

    @pytest.mark.parametrize(
        "theta, bins, expected",
        [
            (-math.pi, 8, 0),
            (0.0, 8, 4),
            (math.pi - 1e-12, 8, 7),
            (math.pi, 8, 0),
            (2.0, 1, 0),
        ],
    )
    def test_direction_bin(self, theta, bins, expected):
        assert direction_bin(theta, bins) == expected

    def test_direction_bin_invalid_bins_raise(self):
        with pytest.raises(ValueError, match="bins must be >= 1"):
            direction_bin(0.0, 0)

    def test_wrapped_normal_bin_masses(self):
        masses = wrapped_normal_bin_masses(0.3, 0.8, 8)
        assert masses.sum() == pytest.approx(1.0, abs=1e-6)
        assert masses.argmax() == direction_bin(0.3, 8)
        point = wrapped_normal_bin_masses(-math.pi / 2, 0.0, 4)
        np.testing.assert_array_equal(point, [0.0, 1.0, 0.0, 0.0])
