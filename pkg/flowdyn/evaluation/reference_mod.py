from typing import Dict, Optional, Sequence

from ..angles import TWO_PI
from ..cell_key import CellKey, key_of
from ..dir_histogram import DENSITY_FLOOR, DirHistogram
from ..exceptions import ValueError
from ..position import Position3
from ..simulator.detection import Detection
from .metrics import mpp

__all__ = ["ReferenceMoD", "REFERENCE_RESOLUTION"]

REFERENCE_RESOLUTION = 0.1


class ReferenceMoD:
    """Fine-grid heading histograms of a whole training stream, the empirical upper bound.

    :param bins: angular bins per cell
    :param resolution: grid cell side in meters
    """

    def __init__(self, bins: int = 8, resolution: float = REFERENCE_RESOLUTION) -> None:
        if not resolution > 0:
            raise ValueError("resolution must be > 0, got {}.".format(resolution))
        self.bins: int = bins
        self.resolution: float = resolution
        self.grid: Dict[CellKey, DirHistogram] = {}

    @classmethod
    def build_reference(
        cls, train: Sequence[Detection], bins: int = 8, resolution: float = REFERENCE_RESOLUTION
    ) -> "ReferenceMoD":
        """Accumulate every training heading in its fine cell.

        :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``train`` is empty.
        """
        if not train:
            raise ValueError("The reference needs a non-empty training stream.")
        ref = cls(bins, resolution)
        for d in train:
            key = key_of(d.position, resolution)
            hist = ref.grid.get(key)
            if hist is None:
                hist = ref.grid[key] = DirHistogram(bins)
            hist.hist_observe(d.theta)
        return ref

    def histogram_at(self, p: Position3) -> Optional[DirHistogram]:
        return self.grid.get(key_of(p, self.resolution))

    def bin_prob(self, p: Position3, b: int) -> float:
        """Normalized count of bin ``b`` at ``p``, ``1 / bins`` in an empty cell."""
        hist = self.histogram_at(p)
        if hist is None:
            return 1.0 / self.bins
        return hist.hist_bin_prob(b)

    def density(self, p: Position3, theta: float) -> float:
        hist = self.histogram_at(p)
        if hist is None:
            return 1.0 / TWO_PI
        return hist.hist_density(theta)

    def reference_mpp(self, detections: Sequence[Detection]) -> float:
        """MPP of the reference on ``detections``, usually its own training stream."""
        return mpp(detections, self.bin_prob, self.bins, uniform_fallback=True)

    def __len__(self) -> int:
        return len(self.grid)

    def __str__(self):
        return "<ReferenceMoD [resolution={resolution}, bins={bins}, cells={cells}, floor={floor}]>".format(
            resolution=self.resolution, bins=self.bins, cells=len(self.grid), floor=DENSITY_FLOOR
        )
