import csv
import math
from typing import Dict, List, Optional, TextIO

from ..dir_histogram import DENSITY_FLOOR
from .metrics import CONTINUOUS_DENSITY_FLOOR, uniform_mlpd, uniform_mpp

__all__ = ["MethodScores", "EvalReport", "write_mlpd_csv", "write_mpp_csv"]

_FMT = "{:.6f}"


def _fmt(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "undefined"
    return _FMT.format(value)


class MethodScores:
    """Metrics of one method at one resolution.

    :param method: ``swgmm``, ``histogram`` or ``meanshift``
    :param mlpd_overall: MLPD with uniform scores for uncovered points
    :param mlpd_covered: MLPD over covered points, ``None`` if none is covered
    :param mpp_overall: MPP with ``1 / B`` for uncovered points
    :param mpp_covered: MPP over covered points, ``None`` if none is covered
    :param coverage_fraction: share of covered test points
    :param covered_cells: cells with a fitted model
    :param k_distribution: number of covered cells per component count, for mixture methods
    """

    def __init__(
        self,
        method: str,
        mlpd_overall: float,
        mlpd_covered: Optional[float],
        mpp_overall: float,
        mpp_covered: Optional[float],
        coverage_fraction: float,
        covered_cells: int = 0,
        k_distribution: Dict[int, int] = None,
    ) -> None:
        self.method: str = method
        self.mlpd_overall: float = mlpd_overall
        self.mlpd_covered: Optional[float] = mlpd_covered
        self.mpp_overall: float = mpp_overall
        self.mpp_covered: Optional[float] = mpp_covered
        self.coverage_fraction: float = coverage_fraction
        self.covered_cells: int = covered_cells
        self.k_distribution: Optional[Dict[int, int]] = (
            dict(sorted(k_distribution.items())) if k_distribution is not None else None
        )

    @property
    def mean_k(self) -> Optional[float]:
        if not self.k_distribution:
            return None
        cells = sum(self.k_distribution.values())
        return sum(k * n for k, n in self.k_distribution.items()) / cells

    def k_share(self, k: int) -> Optional[float]:
        """Share of covered cells whose mixture has ``k`` components."""
        if not self.k_distribution:
            return None
        return self.k_distribution.get(k, 0) / sum(self.k_distribution.values())

    def to_text(self) -> List[str]:
        lines = [
            "coverage_fraction = {}".format(_fmt(self.coverage_fraction)),
            "covered_cells = {}".format(self.covered_cells),
            "mlpd_overall = {}".format(_fmt(self.mlpd_overall)),
            "mlpd_covered = {}".format(_fmt(self.mlpd_covered)),
            "mpp_overall = {}".format(_fmt(self.mpp_overall)),
            "mpp_covered = {}".format(_fmt(self.mpp_covered)),
        ]
        if self.k_distribution is not None:
            lines.append("mean_k = {}".format(_fmt(self.mean_k)))
            lines.append(
                "k_distribution = {}".format(
                    " ".join("{}:{}".format(k, n) for k, n in self.k_distribution.items())
                )
            )
        return lines

    def __str__(self):
        return "<MethodScores [method={method}, mlpd_overall={mlpd}, mpp_covered={mpp}, coverage_fraction={cov}]>".format(
            method=self.method,
            mlpd=self.mlpd_overall,
            mpp=self.mpp_covered,
            cov=self.coverage_fraction,
        )


class EvalReport:
    """Every score of one resolution, the baselines and the reference.

    The first method is the primary one; the ``mlpd_*``, ``mpp_*`` and
    ``coverage_fraction`` properties report it.

    :param resolution: hash resolution in meters
    :param bins: MPP bin count
    :param test_count: number of test detections
    :param methods: scores per method
    :param reference_mpp: MPP of the fine-grid reference on its own training data
    :param histogram_bins: bin count of the histogram baseline
    """

    def __init__(
        self,
        resolution: float,
        bins: int,
        test_count: int,
        methods: List[MethodScores],
        reference_mpp: Optional[float] = None,
        histogram_bins: Optional[int] = None,
    ) -> None:
        self.resolution: float = resolution
        self.bins: int = bins
        self.histogram_bins: int = histogram_bins or bins
        self.test_count: int = test_count
        self.methods: List[MethodScores] = list(methods)
        self.reference_mpp: Optional[float] = reference_mpp
        self.baseline_uniform_mlpd: float = uniform_mlpd()
        self.baseline_uniform_mpp: float = uniform_mpp(bins)

    def method(self, name: str) -> MethodScores:
        for m in self.methods:
            if m.method == name:
                return m
        raise KeyError(name)

    @property
    def primary(self) -> MethodScores:
        return self.methods[0]

    @property
    def mlpd_overall(self) -> float:
        return self.primary.mlpd_overall

    @property
    def mlpd_covered(self) -> Optional[float]:
        return self.primary.mlpd_covered

    @property
    def mpp_overall(self) -> float:
        return self.primary.mpp_overall

    @property
    def mpp_covered(self) -> Optional[float]:
        return self.primary.mpp_covered

    @property
    def coverage_fraction(self) -> float:
        return self.primary.coverage_fraction

    def to_text(self) -> str:
        """Deterministic text: one section for the resolution, then one per method."""
        head = "[report resolution={}]".format(_FMT.format(self.resolution))
        lines = [
            head,
            "bins = {}".format(self.bins),
            "histogram_bins = {}".format(self.histogram_bins),
            "test_count = {}".format(self.test_count),
            "baseline_uniform_mlpd = {}".format(_fmt(self.baseline_uniform_mlpd)),
            "baseline_uniform_mpp = {}".format(_fmt(self.baseline_uniform_mpp)),
            "reference_mpp = {}".format(_fmt(self.reference_mpp)),
            "histogram_density_floor = {!r}".format(DENSITY_FLOOR),
            "continuous_density_floor = {!r}".format(CONTINUOUS_DENSITY_FLOOR),
        ]
        for m in self.methods:
            lines.append("")
            lines.append(
                "[report resolution={} method={}]".format(_FMT.format(self.resolution), m.method)
            )
            lines.extend(m.to_text())
        return "\n".join(lines) + "\n"

    def __str__(self):
        return "<EvalReport [resolution={resolution}, bins={bins}, methods={methods}]>".format(
            resolution=self.resolution,
            bins=self.bins,
            methods=[m.method for m in self.methods],
        )


def write_mlpd_csv(reports: List[EvalReport], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["resolution", "method", "mlpd_overall", "mlpd_covered", "coverage_fraction", "baseline_uniform_mlpd"]
    )
    for r in reports:
        for m in r.methods:
            writer.writerow(
                [
                    _FMT.format(r.resolution),
                    m.method,
                    _fmt(m.mlpd_overall),
                    _fmt(m.mlpd_covered),
                    _fmt(m.coverage_fraction),
                    _fmt(r.baseline_uniform_mlpd),
                ]
            )


def write_mpp_csv(reports: List[EvalReport], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        [
            "resolution",
            "method",
            "mpp_overall",
            "mpp_covered",
            "coverage_fraction",
            "baseline_uniform_mpp",
            "reference_mpp",
        ]
    )
    for r in reports:
        for m in r.methods:
            writer.writerow(
                [
                    _FMT.format(r.resolution),
                    m.method,
                    _fmt(m.mpp_overall),
                    _fmt(m.mpp_covered),
                    _fmt(m.coverage_fraction),
                    _fmt(r.baseline_uniform_mpp),
                    _fmt(r.reference_mpp),
                ]
            )
