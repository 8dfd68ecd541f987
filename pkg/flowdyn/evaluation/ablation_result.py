import csv
import statistics
from typing import Dict, List, TextIO

from .eval_report import MethodScores, _FMT, _fmt

__all__ = ["AblationResult"]


class AblationResult:
    """BIC sweep against mean-shift initialization on identical buffers.

    :param resolution: hash resolution in meters
    :param bic: scores of the BIC sweep
    :param meanshift: scores of the mean-shift initializer
    :param fit_times: wall-clock seconds of every cell fit, per method
    """

    def __init__(
        self,
        resolution: float,
        bic: MethodScores,
        meanshift: MethodScores,
        fit_times: Dict[str, List[float]] = None,
    ) -> None:
        self.resolution: float = resolution
        self.bic: MethodScores = bic
        self.meanshift: MethodScores = meanshift
        self.fit_times: Dict[str, List[float]] = fit_times or {}

    def to_text(self) -> str:
        """Deterministic text; fit times are left to :meth:`write_timing_csv`."""
        lines = ["[ablation resolution={}]".format(_FMT.format(self.resolution))]
        for scores in (self.bic, self.meanshift):
            lines.append("")
            lines.append("[ablation method={}]".format(scores.method))
            lines.extend(scores.to_text())
        return "\n".join(lines) + "\n"

    def write_timing_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["method", "fits", "mean_seconds", "median_seconds", "max_seconds"])
        for method, times in sorted(self.fit_times.items()):
            if not times:
                writer.writerow([method, 0, _fmt(None), _fmt(None), _fmt(None)])
                continue
            writer.writerow(
                [
                    method,
                    len(times),
                    _fmt(statistics.fmean(times)),
                    _fmt(statistics.median(times)),
                    _fmt(max(times)),
                ]
            )

    def __str__(self):
        return "<AblationResult [resolution={resolution}, bic_mean_k={bic}, meanshift_mean_k={ms}]>".format(
            resolution=self.resolution, bic=self.bic.mean_k, ms=self.meanshift.mean_k
        )
