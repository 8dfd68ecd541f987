import io

import pytest

from flowdyn.dir_histogram import DirHistogram
from flowdyn.evaluation.harness import (
    METHODS,
    ablation,
    build_dynamics_layer,
    fit_dynamics,
    resolution_sweep,
    score_histogram,
    score_mixture,
)
from flowdyn.exceptions import ValueError
from flowdyn.fitting.base_fitter import BicSweepFitter
from flowdyn.run_config import RunConfig
from flowdyn.simulator.flow_scenario import builtin_scenario
from flowdyn.simulator.generator import generate


def streams(name: str, duration: float):
    scenario = builtin_scenario(name).with_duration(duration)
    return generate(scenario), generate(scenario.with_seed(1))


@pytest.fixture(scope="module")
def bimodal():
    return streams("bimodal", 120.0)


@pytest.fixture(scope="module")
def bimodal_reports(bimodal):
    train, test = bimodal
    return resolution_sweep(train, test, RunConfig(resolutions=[0.5, 1.0]))


class TestHarness:
    def test_build_dynamics_layer(self):
        config = RunConfig(reservoir_capacity=64, stabilization_window=3.0, fit_seed=9)
        layer = build_dynamics_layer(config, 1.0)
        assert len(layer.graph) == 18 * 10
        assert layer.resolution == 1.0
        assert layer.tracker.window == 3.0
        assert layer.hash_cells.capacity == 64

    def test_fit_dynamics_conserves_observations(self, bimodal):
        train, _ = bimodal
        layer = fit_dynamics(train, RunConfig(), 1.0, BicSweepFitter())
        assert layer.total_seen() == len(train)
        assert len(layer.hash_cells) == 0
        assert any(c.model is not None for c in layer.bound.values())

    def test_score_histogram_shares_coverage(self, bimodal):
        train, test = bimodal
        layer = fit_dynamics(train, RunConfig(), 1.0, BicSweepFitter())
        mixture = score_mixture(layer, test, 8)
        histogram = score_histogram(layer, test, 8)
        assert mixture.coverage_fraction == histogram.coverage_fraction
        assert mixture.covered_cells == histogram.covered_cells
        assert sum(mixture.k_distribution.values()) == mixture.covered_cells
        assert histogram.k_distribution is None

    def test_histogram_scores_the_fitted_buffer(self, bimodal):
        train, test = bimodal
        layer = fit_dynamics(train, RunConfig(reservoir_capacity=20), 1.0, BicSweepFitter())
        fitted = [c for c in layer.bound.values() if c.model is not None]
        assert any(c.histogram.total > c.fit_histogram.total for c in fitted)
        for c in fitted:
            assert c.fit_histogram == DirHistogram.of_headings(
                (z.theta for z in c.buffer.snapshot()), c.histogram.bins
            )
        before = score_histogram(layer, test, 8)
        # the all-observation counts play no part in the score
        for c in fitted:
            c.histogram = DirHistogram(c.histogram.bins)
        after = score_histogram(layer, test, 8)
        assert after.mlpd_overall == before.mlpd_overall
        assert after.mpp_overall == before.mpp_overall
        assert after.mpp_covered == before.mpp_covered

    def test_sweep_reports(self, bimodal_reports):
        assert [r.resolution for r in bimodal_reports] == [0.5, 1.0]
        for r in bimodal_reports:
            assert [m.method for m in r.methods] == list(METHODS)
            assert r.baseline_uniform_mpp == 0.125
            assert 0.0 <= r.reference_mpp <= 1.0
            for m in r.methods:
                assert 0.0 <= m.coverage_fraction <= 1.0
                assert 0.0 <= m.mpp_overall <= 1.0
                cov = m.coverage_fraction
                assert m.mpp_overall == pytest.approx(
                    cov * m.mpp_covered + (1 - cov) * 0.125, abs=1e-9
                )
                if m.mpp_covered > 0.125:
                    assert m.mpp_covered >= m.mpp_overall

    def test_sweep_swgmm_beats_histogram(self, bimodal_reports):
        for r in bimodal_reports:
            assert r.method("swgmm").mlpd_overall > r.method("histogram").mlpd_overall

    def test_sweep_is_deterministic(self, bimodal, bimodal_reports):
        train, test = bimodal
        again = resolution_sweep(train, test, RunConfig(resolutions=[0.5, 1.0]))
        assert [r.to_text() for r in again] == [r.to_text() for r in bimodal_reports]

    def test_sweep_parallel_matches_serial(self, bimodal, bimodal_reports):
        train, test = bimodal
        parallel = resolution_sweep(
            train, test, RunConfig(resolutions=[0.5, 1.0], parallelism=3)
        )
        assert [r.to_text() for r in parallel] == [r.to_text() for r in bimodal_reports]

    def test_sweep_method_subset(self, bimodal):
        train, test = bimodal
        reports = resolution_sweep(train, test, RunConfig(resolutions=[1.0]), ["histogram"])
        assert [m.method for m in reports[0].methods] == ["histogram"]

    @pytest.mark.parametrize("methods", [[], ["uniform"]])
    def test_sweep_unknown_method_raise(self, bimodal, methods):
        train, test = bimodal
        with pytest.raises(ValueError, match="expected a subset"):
            resolution_sweep(train, test, RunConfig(resolutions=[1.0]), methods)

    def test_ablation_reports(self, bimodal):
        train, test = bimodal
        result = ablation(train, test, RunConfig(), 1.0)
        assert result.bic.method == "swgmm"
        assert result.meanshift.method == "meanshift"
        assert result.bic.coverage_fraction == result.meanshift.coverage_fraction
        assert len(result.fit_times["swgmm"]) == result.bic.covered_cells
        assert "[ablation method=meanshift]" in result.to_text()
        out = io.StringIO()
        result.write_timing_csv(out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "method,fits,mean_seconds,median_seconds,max_seconds"
        assert [line.split(",")[0] for line in lines[1:]] == ["meanshift", "swgmm"]


@pytest.mark.slow
class TestMethodOrdering:
    @pytest.fixture(scope="class")
    def multimodal_reports(self):
        train, test = streams("multimodal", 600.0)
        return resolution_sweep(train, test, RunConfig(parallelism=4), ["swgmm", "histogram"])

    def test_swgmm_mlpd_beats_histogram(self, multimodal_reports):
        for r in multimodal_reports:
            assert r.method("swgmm").mlpd_overall > r.method("histogram").mlpd_overall

    def test_swgmm_covered_mpp_beats_histogram(self, multimodal_reports):
        for r in multimodal_reports:
            assert r.method("swgmm").mpp_covered > r.method("histogram").mpp_covered

    def test_overall_mpp_tends_to_uniform_as_coverage_shrinks(self, multimodal_reports):
        by_coverage = sorted(multimodal_reports, key=lambda r: r.coverage_fraction)
        coverages = [r.coverage_fraction for r in multimodal_reports]
        assert coverages == sorted(coverages)
        for method in ("swgmm", "histogram"):
            gaps = [abs(r.method(method).mpp_overall - 0.125) for r in by_coverage]
            assert gaps == sorted(gaps)


@pytest.mark.slow
class TestAblationDirection:
    def test_multimodal(self):
        train, test = streams("multimodal", 600.0)
        result = ablation(train, test, RunConfig(parallelism=4), 0.5)
        assert result.bic.mean_k > result.meanshift.mean_k
        assert result.bic.mpp_covered >= result.meanshift.mpp_covered

    def test_unimodal(self):
        train, test = streams("unimodal", 600.0)
        result = ablation(train, test, RunConfig(parallelism=4), 0.5)
        assert result.bic.k_share(1) >= 0.9
        assert result.meanshift.k_share(1) >= 0.9
