import math

import numpy as np

from flowdyn.fitting import em, kmeanspp, meanshift
from flowdyn.fitting.base_fitter import BicSweepFitter, MeanShiftFitter
from flowdyn.fitting.fit_config import FitConfig
from ..factories import draw_clusters

BUFFER_SIZES = [50, 100, 200, 400]

# every EM run takes the full iteration budget, so both fitters pay for the same EM work
FIXED_BUDGET = FitConfig(em_max_iters=25, em_loglik_tol=1e-12)


class WorkCounter:
    """Tallies the array elements produced by every numeric kernel a fit calls."""

    KERNELS = [
        (em, "replica_log_pdf"),
        (kmeanspp, "circular_linear_sq_dist"),
        (meanshift, "wrap_angles"),
        (meanshift, "circular_linear_sq_dist"),
    ]

    def __init__(self, monkeypatch) -> None:
        self.count = 0
        for module, name in self.KERNELS:
            monkeypatch.setattr(module, name, self._counting(getattr(module, name)))

    def _counting(self, func):
        def wrapper(*args, **kwargs):
            out = func(*args, **kwargs)
            self.count += np.size(out)
            return out

        return wrapper

    def work_of(self, fitter, samples) -> int:
        self.count = 0
        fitter.fit(samples)
        return self.count


def scaling_exponent(sizes, costs) -> float:
    slope, _ = np.polyfit(np.log(sizes), np.log(costs), 1)
    return float(slope)


def samples_of(n: int):
    rng = np.random.default_rng(n)
    half = n // 2
    return draw_clusters(rng, [(-math.pi / 2, 1.0), (math.pi / 2, 1.0)], half, 0.1)


class TestFitCost:
    def test_bic_update_work_linear(self, monkeypatch):
        counter = WorkCounter(monkeypatch)
        fitter = BicSweepFitter(FIXED_BUDGET)
        costs = [counter.work_of(fitter, samples_of(n)) for n in BUFFER_SIZES]
        assert 0.8 <= scaling_exponent(BUFFER_SIZES, costs) <= 1.3

    def test_meanshift_update_work_superlinear(self, monkeypatch):
        counter = WorkCounter(monkeypatch)
        fitter = MeanShiftFitter(FIXED_BUDGET)
        costs = [counter.work_of(fitter, samples_of(n)) for n in BUFFER_SIZES]
        assert scaling_exponent(BUFFER_SIZES, costs) > 1.5

    def test_meanshift_outgrows_bic_on_the_same_cells(self, monkeypatch):
        counter = WorkCounter(monkeypatch)
        bic = BicSweepFitter(FIXED_BUDGET)
        shift = MeanShiftFitter(FIXED_BUDGET)
        ratios = []
        for n in BUFFER_SIZES:
            samples = samples_of(n)
            ratios.append(counter.work_of(shift, samples) / counter.work_of(bic, samples))
        assert ratios[-1] > 2 * ratios[0]
