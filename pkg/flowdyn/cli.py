import argparse
import logging
import os
import sys
from typing import List, Optional, Sequence

from .__version__ import __version__
from .binding.replay import replay
from .evaluation.ablation_result import AblationResult
from .evaluation.eval_report import EvalReport, MethodScores, write_mlpd_csv, write_mpp_csv
from .evaluation.harness import (
    METHODS,
    ablation,
    build_dynamics_layer,
    resolution_sweep,
    score_histogram,
    score_mixture,
)
from .evaluation.metrics import coverage_fraction, mlpd, mpp
from .evaluation.reference_mod import ReferenceMoD
from .evaluation.svg_export import export_svg
from .exceptions import FlowDynError, ValueError
from .fitting.base_fitter import fitter_by_name
from .run_config import RunConfig, load_run_config
from .scene_graph.layered_graph import LayeredGraph
from .scene_graph.pose_event import read_pose_events
from .simulator.detection import Detection, read_detections, write_detections
from .simulator.flow_scenario import FlowScenario, builtin_scenario, load_scenario
from .simulator.generator import generate
from .snapshot import read_snapshot, write_snapshot

__all__ = [
    "main",
    "cmd_simulate",
    "cmd_fit",
    "cmd_eval",
    "cmd_sweep",
    "cmd_ablate",
    "cmd_export",
    "resolve_scenario",
]

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
SNAPSHOT_NAME = "snapshot.json"


def resolve_scenario(spec: str) -> FlowScenario:
    """A scenario from ``builtin:<name>`` or a TOML path."""
    if spec.startswith(BUILTIN_PREFIX):
        return builtin_scenario(spec[len(BUILTIN_PREFIX):])
    return load_scenario(spec)


def _read_detections(path: str) -> List[Detection]:
    with open(path, "r", encoding="utf-8") as f:
        return read_detections(f)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _streams(
    run_config: RunConfig, train_path: Optional[str], test_path: Optional[str]
):
    """Training and test streams, simulated from the configured scenario when not given.

    Simulated streams share the corridors and use consecutive seeds.
    """
    if (train_path is None) != (test_path is None):
        raise ValueError("Give both --train and --test or neither.")
    if train_path is not None:
        return _read_detections(train_path), _read_detections(test_path)
    scenario = resolve_scenario(run_config.scenario)
    train = generate(scenario.with_seed(run_config.simulation_seed))
    test = generate(scenario.with_seed(run_config.simulation_seed + 1))
    return train, test


def cmd_simulate(
    scenario: FlowScenario, seed: int, out: str, duration: Optional[float] = None
) -> int:
    """Write the detection stream of a scenario.

    :return: number of detections written
    """
    scenario = scenario.with_seed(seed)
    if duration is not None:
        scenario = scenario.with_duration(duration)
    detections = generate(scenario)
    with open(out, "w", encoding="utf-8", newline="\n") as f:
        write_detections(detections, f)
    logger.info("Wrote %d detections to %s.", len(detections), out)
    return len(detections)


def cmd_fit(
    detections_path: str,
    run_config: RunConfig,
    out: str,
    resolution: float = 0.5,
    pose_events_path: Optional[str] = None,
    fitter_name: str = "bic",
):
    """Replay detections and pose events, bind and fit on schedule, write a snapshot.

    Without pose events the navigational layer is a grid at ``resolution``
    spacing over the configured bounds; with them it starts empty and is
    built by the events.

    :return: the fitted dynamics layer
    """
    detections = _read_detections(detections_path)
    events = read_pose_events(pose_events_path) if pose_events_path else []
    graph = None if not events else LayeredGraph()
    layer = build_dynamics_layer(run_config, resolution, graph)
    fitter = fitter_by_name(fitter_name, run_config.fit)
    replay(
        layer,
        detections,
        fitter,
        run_config.update_interval,
        pose_events=events,
        parallelism=run_config.parallelism,
    )
    write_snapshot(layer, run_config, out)
    logger.info(
        "Wrote snapshot of %d bound and %d hash cells to %s.",
        len(layer.bound),
        len(layer.hash_cells),
        out,
    )
    return layer


def _uniform_scores(test: Sequence[Detection], bins: int) -> MethodScores:
    return MethodScores(
        "uniform",
        mlpd(test, lambda p: None, True),
        None,
        mpp(test, lambda p, b: None, bins, True),
        None,
        coverage_fraction(test, lambda p: False),
    )


def cmd_eval(
    snapshot_path: str,
    test_path: str,
    out_dir: str,
    train_path: Optional[str] = None,
    uniform_only: bool = False,
    bins: Optional[int] = None,
) -> EvalReport:
    """Score a snapshot on a test stream and write ``report.txt``, ``mlpd.csv`` and ``mpp.csv``.

    :param snapshot_path: written by :func:`cmd_fit`
    :param test_path: held-out detections
    :param out_dir: report directory, created if missing
    :param train_path: training detections for the reference MPP
    :param uniform_only: score the uniform model alone
    :param bins: MPP bins, the snapshot's if omitted
    """
    layer, run_config = read_snapshot(snapshot_path)
    test = _read_detections(test_path)
    bins = bins or run_config.bins
    if uniform_only:
        methods = [_uniform_scores(test, bins)]
    else:
        methods = [score_mixture(layer, test, bins), score_histogram(layer, test, bins)]
    reference_mpp = None
    if train_path:
        train = _read_detections(train_path)
        reference_mpp = ReferenceMoD.build_reference(train, bins).reference_mpp(train)
    report = EvalReport(
        layer.resolution, bins, len(test), methods, reference_mpp, run_config.histogram_bins
    )
    _write_reports([report], out_dir, single=True)
    return report


def _write_reports(reports: List[EvalReport], out_dir: str, single: bool = False) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for r in reports:
        name = "report.txt" if single else "report_{:.3f}.txt".format(r.resolution)
        _write_text(os.path.join(out_dir, name), r.to_text())
    with open(os.path.join(out_dir, "mlpd.csv"), "w", encoding="utf-8", newline="\n") as f:
        write_mlpd_csv(reports, f)
    with open(os.path.join(out_dir, "mpp.csv"), "w", encoding="utf-8", newline="\n") as f:
        write_mpp_csv(reports, f)


def cmd_sweep(
    run_config: RunConfig,
    out_dir: str,
    train_path: Optional[str] = None,
    test_path: Optional[str] = None,
    methods: Sequence[str] = METHODS,
) -> List[EvalReport]:
    """Run the resolution sweep and write one report per resolution plus CSV mirrors."""
    train, test = _streams(run_config, train_path, test_path)
    reports = resolution_sweep(train, test, run_config, methods)
    _write_reports(reports, out_dir)
    return reports


def cmd_ablate(
    run_config: RunConfig,
    out_dir: str,
    resolution: float = 0.5,
    train_path: Optional[str] = None,
    test_path: Optional[str] = None,
) -> AblationResult:
    """Compare the BIC sweep with mean-shift initialization; write ``ablation.txt`` and ``ablation_timing.csv``."""
    train, test = _streams(run_config, train_path, test_path)
    result = ablation(train, test, run_config, resolution)
    os.makedirs(out_dir, exist_ok=True)
    _write_text(os.path.join(out_dir, "ablation.txt"), result.to_text())
    with open(
        os.path.join(out_dir, "ablation_timing.csv"), "w", encoding="utf-8", newline="\n"
    ) as f:
        result.write_timing_csv(f)
    return result


def cmd_export(snapshot_path: str, out: str) -> int:
    """Draw the flow map of a snapshot.

    :return: number of arrows drawn
    """
    layer, run_config = read_snapshot(snapshot_path)
    return export_svg(layer, out, run_config.bounds)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="run configuration TOML file")
    parser.add_argument("--scenario", help="scenario TOML path or builtin:<name>")
    parser.add_argument("--resolutions", type=float, nargs="+", help="hash resolutions in meters")
    parser.add_argument("--bins", type=int, help="MPP angular bins")
    parser.add_argument("--histogram-bins", type=int, help="bins of the histogram baseline")
    parser.add_argument("--reservoir-capacity", type=int, help="reservoir capacity M")
    parser.add_argument("--update-interval", type=float, help="seconds between model updates")
    parser.add_argument("--stabilization-window", type=float, help="quiet seconds before binding")
    parser.add_argument("--significance-threshold", type=float, help="meters of node motion that count")
    parser.add_argument("--min-fit-samples", type=int, help="smallest buffer that is fitted")
    parser.add_argument("--parallelism", type=int, help="worker threads")
    parser.add_argument("--simulation-seed", type=int, help="seed of simulated training data")
    parser.add_argument("--output-dir", help="default directory of written files")


def _run_config(args: argparse.Namespace, fit_seed: Optional[int] = None) -> RunConfig:
    base = load_run_config(args.config) if args.config else RunConfig()
    return base.with_overrides(
        scenario=args.scenario,
        resolutions=args.resolutions,
        bins=args.bins,
        histogram_bins=args.histogram_bins,
        reservoir_capacity=args.reservoir_capacity,
        update_interval=args.update_interval,
        stabilization_window=args.stabilization_window,
        significance_threshold=args.significance_threshold,
        min_fit_samples=args.min_fit_samples,
        parallelism=args.parallelism,
        simulation_seed=args.simulation_seed,
        output_dir=args.output_dir,
        fit_seed=fit_seed,
    )


def _out_dir(args: argparse.Namespace, run_config: RunConfig) -> str:
    return args.out or run_config.output_dir


def _fit(args: argparse.Namespace):
    run_config = _run_config(args, args.seed)
    out = args.out
    if out is None:
        os.makedirs(run_config.output_dir, exist_ok=True)
        out = os.path.join(run_config.output_dir, SNAPSHOT_NAME)
    return cmd_fit(
        args.detections, run_config, out, args.resolution, args.pose_events, args.fitter
    )


def _sweep(args: argparse.Namespace) -> List[EvalReport]:
    run_config = _run_config(args, args.seed)
    return cmd_sweep(run_config, _out_dir(args, run_config), args.train, args.test, args.methods)


def _ablate(args: argparse.Namespace) -> AblationResult:
    run_config = _run_config(args, args.seed)
    return cmd_ablate(
        run_config, _out_dir(args, run_config), args.resolution, args.train, args.test
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowdyn", description="Online maps of dynamics on a layered scene graph."
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a synthetic detection stream")
    p.add_argument("--scenario", required=True, help="scenario TOML path or builtin:<name>")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--duration", type=float, help="override the scenario duration")
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: cmd_simulate(resolve_scenario(a.scenario), a.seed, a.out, a.duration))

    p = sub.add_parser("fit", help="replay detections into a map of dynamics")
    p.add_argument("--detections", required=True)
    p.add_argument("--pose-events", help="pose-event stream")
    p.add_argument("--seed", type=int, required=True, help="fit seed")
    p.add_argument("--resolution", type=float, default=0.5)
    p.add_argument("--fitter", choices=["bic", "meanshift"], default="bic")
    p.add_argument("--out", help="snapshot file, snapshot.json in the configured output_dir if omitted")
    _add_config_flags(p)
    p.set_defaults(func=_fit)

    p = sub.add_parser("eval", help="score a snapshot on held-out detections")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--train", help="training detections for the reference MPP")
    p.add_argument("--uniform-only", action="store_true")
    p.add_argument("--bins", type=int)
    p.add_argument("--out", required=True, help="report directory")
    p.set_defaults(
        func=lambda a: cmd_eval(a.snapshot, a.test, a.out, a.train, a.uniform_only, a.bins)
    )

    p = sub.add_parser("sweep", help="evaluate every method at every resolution")
    p.add_argument("--train")
    p.add_argument("--test")
    p.add_argument("--seed", type=int, help="fit seed")
    p.add_argument("--methods", nargs="+", choices=list(METHODS), default=list(METHODS))
    p.add_argument("--out", help="report directory, the configured output_dir if omitted")
    _add_config_flags(p)
    p.set_defaults(func=_sweep)

    p = sub.add_parser("ablate", help="BIC sweep against mean-shift initialization")
    p.add_argument("--train")
    p.add_argument("--test")
    p.add_argument("--seed", type=int, help="fit seed")
    p.add_argument("--resolution", type=float, default=0.5)
    p.add_argument("--out", help="report directory, the configured output_dir if omitted")
    _add_config_flags(p)
    p.set_defaults(func=_ablate)

    p = sub.add_parser("export", help="draw the flow map of a snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--out", required=True, help="SVG file")
    p.set_defaults(func=lambda a: cmd_export(a.snapshot, a.out))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        args.func(args)
    except (FlowDynError, OSError) as e:
        message = " ".join(str(e).split())
        print("{}: {}".format(type(e).__name__, message), file=sys.stderr)
        return 1
    return 0
