import math

import pytest

from flowdyn.dir_histogram import DENSITY_FLOOR, DirHistogram
from flowdyn.exceptions import ValueError


class TestDirHistogram:
    @pytest.mark.parametrize("bins", [0, 361])
    def test_invalid_bins_raise(self, bins):
        with pytest.raises(ValueError, match="bins must be in 1..360"):
            DirHistogram(bins)

    @pytest.mark.parametrize(
        "theta, expected", [(-math.pi, 0), (0.0, 4), (math.pi - 1e-9, 7)]
    )
    def test_hist_observe(self, theta, expected):
        h = DirHistogram(8)
        h.hist_observe(theta)
        assert h.counts[expected] == 1
        assert h.total == 1

    def test_hist_bin_prob(self):
        h = DirHistogram(8)
        assert h.hist_bin_prob(3) == 1 / 8
        h.counts = [4, 4, 0, 0, 0, 0, 0, 0]
        h.total = 8
        assert h.hist_bin_prob(0) == 0.5
        assert sum(h.hist_bin_prob(b) for b in range(8)) == 1.0
        with pytest.raises(ValueError):
            h.hist_bin_prob(8)

    def test_hist_density(self):
        h = DirHistogram(8)
        assert h.hist_density(1.0) == pytest.approx(1 / (2 * math.pi))
        h.hist_observe(0.1)
        assert h.hist_density(0.2) == pytest.approx(8 / (2 * math.pi))
        assert h.hist_density(-2.0) == DENSITY_FLOOR
        assert h.log_density(-2.0) == pytest.approx(-27.631, abs=1e-3)

    def test_density_integrates_to_one(self, rng):
        h = DirHistogram(16)
        for theta in rng.uniform(-math.pi, math.pi, 5000):
            h.hist_observe(theta)
        assert all(h.counts)
        integral = sum(h.hist_density(-math.pi + (b + 0.5) * h.bin_width) for b in range(16))
        assert integral * h.bin_width == pytest.approx(1.0, abs=1e-9)

    def test_coarse_bin_prob(self):
        fine = DirHistogram(16)
        for b in (0, 1, 1, 9):
            fine.hist_observe(-math.pi + (b + 0.5) * fine.bin_width)
        assert fine.coarse_bin_prob(0, 8) == pytest.approx(0.75)
        assert fine.coarse_bin_prob(4, 8) == pytest.approx(0.25)
        assert sum(fine.coarse_bin_prob(b, 8) for b in range(8)) == pytest.approx(1.0)
        assert sum(fine.coarse_bin_prob(b, 5) for b in range(5)) == pytest.approx(1.0)
        assert fine.coarse_bin_prob(9, 16) == fine.hist_bin_prob(9)
        coarse = DirHistogram(4)
        coarse.hist_observe(0.1)
        assert coarse.coarse_bin_prob(4, 8) == pytest.approx(0.5)
        assert coarse.coarse_bin_prob(5, 8) == pytest.approx(0.5)
        with pytest.raises(ValueError):
            coarse.coarse_bin_prob(8, 8)

    def test_merge(self):
        a, b = DirHistogram(8), DirHistogram(8)
        a.hist_observe(0.0)
        b.hist_observe(0.0)
        b.hist_observe(-3.0)
        a.merge(b)
        assert a.total == 3
        assert a.counts[4] == 2
        with pytest.raises(ValueError, match="8 and 4 bins"):
            a.merge(DirHistogram(4))

    def test_of_headings(self):
        h = DirHistogram.of_headings([0.0, 0.1, -3.0], 4)
        assert h.bins == 4
        assert h.counts == [1, 0, 2, 0]
        assert h.total == 3
        assert DirHistogram.of_headings([]).total == 0

    def test_dict(self):
        h = DirHistogram(8)
        h.hist_observe(0.5)
        assert DirHistogram.from_dict(h.to_dict()) == h
        with pytest.raises(ValueError, match="non-negative"):
            DirHistogram.from_dict({"bins": 2, "counts": [1, -1]})
        assert h != "BAD TYPE"
