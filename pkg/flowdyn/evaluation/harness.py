import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ablation_result import AblationResult
from .eval_report import EvalReport, MethodScores
from .metrics import coverage_fraction, mlpd, mpp
from .reference_mod import ReferenceMoD
from ..binding.dynamics_layer import DynamicsLayer
from ..binding.replay import replay
from ..binding.stability_tracker import StabilityTracker
from ..dir_histogram import DirHistogram
from ..dynamics_cell import DynamicsCell
from ..exceptions import UndefinedMetricError, ValueError
from ..fitting.base_fitter import BaseFitter, BicSweepFitter, MeanShiftFitter
from ..position import Position3
from ..run_config import RunConfig
from ..scene_graph.layered_graph import LayeredGraph
from ..simulator.detection import Detection

__all__ = [
    "build_dynamics_layer",
    "fit_dynamics",
    "score_mixture",
    "score_histogram",
    "resolution_sweep",
    "ablation",
    "METHODS",
]

logger = logging.getLogger(__name__)

METHODS = ("swgmm", "histogram", "meanshift")


def build_dynamics_layer(
    run_config: RunConfig, resolution: float, graph: LayeredGraph = None
) -> DynamicsLayer:
    """An empty dynamics layer over ``graph``, a navigational grid at ``resolution`` spacing if omitted."""
    if graph is None:
        graph = LayeredGraph.build_nav_layer(run_config.bounds, resolution)
    return DynamicsLayer(
        graph,
        resolution,
        StabilityTracker(run_config.stabilization_window, run_config.significance_threshold),
        run_config.reservoir_capacity,
        run_config.histogram_bins,
        run_config.min_fit_samples,
        seed=run_config.fit_seed,
    )


def fit_dynamics(
    train: Sequence[Detection],
    run_config: RunConfig,
    resolution: float,
    fitter: BaseFitter,
    parallelism: int = 1,
) -> DynamicsLayer:
    """Ingest a training stream, bind once the grid is stable and fit every cell once."""
    layer = build_dynamics_layer(run_config, resolution)
    return replay(
        layer,
        train,
        fitter,
        run_config.update_interval,
        parallelism=parallelism,
        scheduled=False,
    )


def _covered_cell(layer: DynamicsLayer) -> Callable[[Position3], Optional[DynamicsCell]]:
    def lookup(p: Position3) -> Optional[DynamicsCell]:
        cell = layer.lookup(p)
        return cell if cell is not None and cell.model is not None else None

    return lookup


def _covered_only(metric: Callable[[], float]) -> Optional[float]:
    try:
        return metric()
    except UndefinedMetricError:
        return None


def _k_distribution(layer: DynamicsLayer) -> Dict[int, int]:
    return dict(Counter(c.model.k for c in layer.bound.values() if c.model is not None))


def _covered_cells(layer: DynamicsLayer) -> int:
    return sum(1 for c in layer.bound.values() if c.model is not None)


def score_mixture(
    layer: DynamicsLayer, test: Sequence[Detection], bins: int, method: str = "swgmm"
) -> MethodScores:
    """Score the fitted mixtures of a layer.

    A test point is covered when its box belongs to a bound cell with a fitted model.
    """
    covered = _covered_cell(layer)
    masses: Dict[int, Tuple[object, np.ndarray]] = {}

    def density_lookup(p: Position3):
        cell = covered(p)
        if cell is None:
            return None
        model = cell.model
        return lambda theta: float(model.marginal_direction_density(theta)[0])

    def mass_lookup(p: Position3, b: int) -> Optional[float]:
        cell = covered(p)
        if cell is None:
            return None
        entry = masses.get(id(cell.model))
        if entry is None:
            entry = masses[id(cell.model)] = (cell.model, cell.model.bin_masses(bins))
        return float(min(max(entry[1][b], 0.0), 1.0))

    return MethodScores(
        method,
        mlpd(test, density_lookup, True),
        _covered_only(lambda: mlpd(test, density_lookup, False)),
        mpp(test, mass_lookup, bins, True),
        _covered_only(lambda: mpp(test, mass_lookup, bins, False)),
        coverage_fraction(test, lambda p: covered(p) is not None),
        _covered_cells(layer),
        _k_distribution(layer),
    )


def score_histogram(
    layer: DynamicsLayer, test: Sequence[Detection], bins: int
) -> MethodScores:
    """Score the per-cell heading histograms of a layer on the same coverage as its mixtures.

    Each cell is scored with the histogram of the buffer entries its mixture
    was fitted on, so both methods see the same detections. Cells restored
    without one fall back to the histogram of every observation.
    """
    covered = _covered_cell(layer)

    def histogram_of(p: Position3) -> Optional[DirHistogram]:
        cell = covered(p)
        if cell is None:
            return None
        return cell.fit_histogram if cell.fit_histogram is not None else cell.histogram

    def density_lookup(p: Position3):
        histogram = histogram_of(p)
        return None if histogram is None else histogram.hist_density

    def mass_lookup(p: Position3, b: int) -> Optional[float]:
        histogram = histogram_of(p)
        return None if histogram is None else histogram.coarse_bin_prob(b, bins)

    return MethodScores(
        "histogram",
        mlpd(test, density_lookup, True),
        _covered_only(lambda: mlpd(test, density_lookup, False)),
        mpp(test, mass_lookup, bins, True),
        _covered_only(lambda: mpp(test, mass_lookup, bins, False)),
        coverage_fraction(test, lambda p: covered(p) is not None),
        _covered_cells(layer),
    )


def _fitter(name: str, run_config: RunConfig) -> BaseFitter:
    if name == "meanshift":
        return MeanShiftFitter(run_config.fit)
    return BicSweepFitter(run_config.fit)


def _fit_times(layer: DynamicsLayer) -> List[float]:
    return [
        c.last_fit_seconds for _, c in layer.cells() if c.last_fit_seconds is not None
    ]


def resolution_sweep(
    train: Sequence[Detection],
    test: Sequence[Detection],
    run_config: RunConfig,
    methods: Sequence[str] = METHODS,
) -> List[EvalReport]:
    """Fit and score every method at every resolution of ``run_config``.

    The navigational grid spacing equals the resolution. The histogram
    baseline is read from the cells of the BIC fit and counts the same
    buffer entries as their mixtures. Distinct
    ``(resolution, fitter)`` pairs run on ``parallelism`` worker threads.

    :param train: training detections
    :param test: held-out detections
    :param run_config: resolutions, bins and fit parameters
    :param methods: subset of :data:`METHODS`, reported in this order
    :return: one report per resolution
    """
    unknown = [m for m in methods if m not in METHODS]
    if unknown or not methods:
        raise ValueError("Unknown methods {}, expected a subset of {}.".format(unknown, METHODS))
    reference = ReferenceMoD.build_reference(train, run_config.bins)
    reference_mpp = reference.reference_mpp(train)
    fitters = ["meanshift"] if list(methods) == ["meanshift"] else ["swgmm"]
    if "meanshift" in methods and "meanshift" not in fitters:
        fitters.append("meanshift")
    tasks = [(r, f) for r in run_config.resolutions for f in fitters]

    def run(task: Tuple[float, str]) -> DynamicsLayer:
        resolution, name = task
        logger.info("Fitting %s at resolution %.3f m.", name, resolution)
        return fit_dynamics(train, run_config, resolution, _fitter(name, run_config))

    if run_config.parallelism > 1:
        with ThreadPoolExecutor(max_workers=run_config.parallelism) as pool:
            layers = dict(zip(tasks, pool.map(run, tasks)))
    else:
        layers = {task: run(task) for task in tasks}

    reports = []
    for resolution in run_config.resolutions:
        scores = []
        for name in methods:
            if name == "histogram":
                scores.append(
                    score_histogram(layers[(resolution, fitters[0])], test, run_config.bins)
                )
            else:
                scores.append(
                    score_mixture(layers[(resolution, name)], test, run_config.bins, name)
                )
        reports.append(
            EvalReport(
                resolution,
                run_config.bins,
                len(test),
                scores,
                reference_mpp,
                run_config.histogram_bins,
            )
        )
    return reports


def ablation(
    train: Sequence[Detection],
    test: Sequence[Detection],
    run_config: RunConfig,
    resolution: float = 0.5,
) -> AblationResult:
    """BIC sweep against mean-shift initialization with identical buffers and seeds.

    :param train: training detections
    :param test: held-out detections
    :param run_config: fit parameters shared by both methods
    :param resolution: hash resolution in meters
    :return: paired scores, component count distributions and fit times
    """
    layers = {
        name: fit_dynamics(
            train, run_config, resolution, _fitter(name, run_config), run_config.parallelism
        )
        for name in ("swgmm", "meanshift")
    }
    bic = score_mixture(layers["swgmm"], test, run_config.bins, "swgmm")
    meanshift = score_mixture(layers["meanshift"], test, run_config.bins, "meanshift")
    fit_times = {name: _fit_times(layer) for name, layer in layers.items()}
    for name, times in sorted(fit_times.items()):
        if times:
            logger.info(
                "%s: %d fits, mean %.4fs per fit.", name, len(times), sum(times) / len(times)
            )
    return AblationResult(resolution, bic, meanshift, fit_times)
