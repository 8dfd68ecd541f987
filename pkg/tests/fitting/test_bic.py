import math

import numpy as np
import pytest

from flowdyn.angles import angular_diff
from flowdyn.cylindrical_sample import CylindricalSample
from flowdyn.exceptions import FitFailureError, ValueError
from flowdyn.fitting import bic
from flowdyn.fitting.bic import bic_score, bic_sweep_fit, free_parameter_count
from flowdyn.fitting.fit_config import FitConfig
from flowdyn.fitting.fit_diagnostics import FitDiagnostics, InitMethod
from ..factories import draw_clusters


def recovers_two_clusters(seed: int) -> bool:
    rng = np.random.default_rng(seed)
    samples = draw_clusters(rng, [(-math.pi / 2, 1.0), (math.pi / 2, 1.0)], 200, 0.1)
    model, diagnostics = bic_sweep_fit(samples, FitConfig(rng_seed=seed))
    if diagnostics.selected_k != 2 or model.k != 2:
        return False
    for target in (-math.pi / 2, math.pi / 2):
        c = min(model.components, key=lambda c: abs(angular_diff(c.mu_theta, target)))
        if abs(angular_diff(c.mu_theta, target)) > 0.05 or abs(c.mu_rho - 1.0) > 0.05:
            return False
    return True


class TestBic:
    @pytest.mark.parametrize("k, expected", [(1, 5), (2, 11), (3, 17), (4, 23), (5, 29)])
    def test_free_parameter_count(self, k, expected):
        assert free_parameter_count(k) == expected

    def test_free_parameter_count_invalid_raise(self):
        with pytest.raises(ValueError):
            free_parameter_count(0)

    def test_bic_score(self):
        assert bic_score(-10.0, 2, 100) == pytest.approx(11 * math.log(100) + 20.0)

    def test_unimodal(self, rng):
        samples = draw_clusters(rng, [(0.5, 1.2)], 200, 0.1)
        model, diagnostics = bic_sweep_fit(samples, FitConfig())
        assert diagnostics.selected_k == 1
        assert model.k == 1
        assert diagnostics.init_method is InitMethod.BIC_KMEANSPP
        assert [k for k, _ in diagnostics.bic_per_k] == [1, 2, 3, 4, 5]

    def test_two_clusters(self, two_clusters):
        model, diagnostics = bic_sweep_fit(two_clusters, FitConfig())
        assert diagnostics.selected_k == 2
        assert model.k == 2

    def test_selected_k_minimizes_bic(self, two_clusters):
        _, diagnostics = bic_sweep_fit(two_clusters, FitConfig(k_max=4))
        best = min(b for _, b in diagnostics.bic_per_k)
        first_best = next(k for k, b in diagnostics.bic_per_k if b == best)
        assert diagnostics.selected_k == first_best
        assert len(diagnostics.loglik_history_per_k) == 4

    def test_feasibility_cutoff(self):
        samples = draw_clusters(np.random.default_rng(2), [(0.0, 1.0)], 7, 0.1)
        _, diagnostics = bic_sweep_fit(samples, FitConfig())
        assert [k for k, _ in diagnostics.bic_per_k] == [1, 2]

    def test_too_few_samples_raise(self):
        with pytest.raises(FitFailureError, match="fewer than the 3 needed"):
            bic_sweep_fit([CylindricalSample(0.0, 1.0)] * 2, FitConfig())

    def test_wrap_straddling_cluster_is_one_component(self):
        for seed in range(20):
            rng = np.random.default_rng(1000 + seed)
            samples = draw_clusters(
                rng, [(math.pi - 0.05, 1.0), (-math.pi + 0.05, 1.0)], 100, 0.1
            )
            model, diagnostics = bic_sweep_fit(samples, FitConfig(rng_seed=seed))
            assert diagnostics.selected_k == 1
            assert abs(angular_diff(model.components[0].mu_theta, math.pi)) < 0.05

    def test_rotation_equivariant(self, two_clusters):
        shift = 1.4
        rotated = [CylindricalSample(z.theta + shift, z.rho) for z in two_clusters]
        model, diagnostics = bic_sweep_fit(two_clusters, FitConfig(rng_seed=3))
        model_r, diagnostics_r = bic_sweep_fit(rotated, FitConfig(rng_seed=3))
        assert diagnostics.selected_k == diagnostics_r.selected_k
        for c, c_r in zip(model.components, model_r.components):
            assert abs(angular_diff(c_r.mu_theta, c.mu_theta + shift)) < 1e-6
            assert c_r.mu_rho == pytest.approx(c.mu_rho, abs=1e-6)
        for (k, b), (k_r, b_r) in zip(diagnostics.bic_per_k, diagnostics_r.bic_per_k):
            assert k == k_r
            assert b_r == pytest.approx(b, abs=1e-6)

    def test_deterministic(self, two_clusters):
        model, diagnostics = bic_sweep_fit(two_clusters, FitConfig(rng_seed=5))
        model_2, diagnostics_2 = bic_sweep_fit(two_clusters, FitConfig(rng_seed=5))
        assert model == model_2
        assert diagnostics.bic_per_k == diagnostics_2.bic_per_k

    def test_recovery_rate(self):
        assert sum(recovers_two_clusters(seed) for seed in range(10)) >= 9

    @pytest.mark.slow
    def test_recovery_rate_full(self):
        assert sum(recovers_two_clusters(seed) for seed in range(100)) >= 95

    def test_diagnostics_dict(self, two_clusters):
        _, diagnostics = bic_sweep_fit(two_clusters, FitConfig(k_max=2))
        restored = FitDiagnostics.from_dict(diagnostics.to_dict())
        assert restored.to_dict() == diagnostics.to_dict()

    def test_collapsed_candidates_recorded_under_surviving_k(self, two_clusters, monkeypatch):
        real_run_em = bic.run_em

        def run_em_keeping_two(theta, rho, k, labels, cfg):
            # stands in for EM dropping every component past the second
            return real_run_em(theta, rho, min(k, 2), np.minimum(labels, 1), cfg)

        monkeypatch.setattr(bic, "run_em", run_em_keeping_two)
        model, diagnostics = bic_sweep_fit(two_clusters, FitConfig())
        assert [k for k, _ in diagnostics.bic_per_k] == [1, 2]
        assert [k for k, _ in diagnostics.em_iters_per_k] == [1, 2]
        assert diagnostics.selected_k == model.k == 2
