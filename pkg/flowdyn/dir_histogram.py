import math
from typing import Iterable, List

from .angles import TWO_PI, direction_bin
from .exceptions import ValueError

__all__ = ["DirHistogram", "DENSITY_FLOOR", "MAX_BINS"]

DENSITY_FLOOR = 1e-12
MAX_BINS = 360


class DirHistogram:
    """Direction-only histogram of one cell, the discrete baseline.

    :param bins: number of equal angular bins over ``[-pi, pi)``
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``bins`` is not in ``1..360``.
    """

    __slots__ = ("bins", "counts", "total")

    def __init__(self, bins: int = 8) -> None:
        if not 1 <= bins <= MAX_BINS:
            raise ValueError(
                "bins must be in 1..{}, got {}.".format(MAX_BINS, bins)
            )
        self.bins: int = int(bins)
        self.counts: List[int] = [0] * self.bins
        self.total: int = 0

    @classmethod
    def of_headings(cls, thetas: Iterable[float], bins: int = 8) -> "DirHistogram":
        """A histogram counting every heading in ``thetas``."""
        h = cls(bins)
        for theta in thetas:
            h.hist_observe(theta)
        return h

    @property
    def bin_width(self) -> float:
        return TWO_PI / self.bins

    def hist_observe(self, theta: float) -> None:
        """Count one heading."""
        self.counts[direction_bin(theta, self.bins)] += 1
        self.total += 1

    def hist_bin_prob(self, b: int) -> float:
        """Normalized count of bin ``b``, ``1 / bins`` while empty."""
        if not 0 <= b < self.bins:
            raise ValueError("bin must be in 0..{}, got {}.".format(self.bins - 1, b))
        if self.total == 0:
            return 1.0 / self.bins
        return self.counts[b] / self.total

    def hist_density(self, theta: float) -> float:
        """Piecewise-constant heading density, floored at :data:`DENSITY_FLOOR`."""
        p = self.hist_bin_prob(direction_bin(theta, self.bins)) / self.bin_width
        return max(p, DENSITY_FLOOR)

    def coarse_bin_prob(self, b: int, bins: int) -> float:
        """Mass of bin ``b`` of another partition of the circle into ``bins`` bins.

        Each own bin spreads its mass evenly over its interval. Equals
        :meth:`hist_bin_prob` when ``bins`` is this histogram's bin count.
        """
        if bins == self.bins:
            return self.hist_bin_prob(b)
        if not 0 <= b < bins:
            raise ValueError("bin must be in 0..{}, got {}.".format(bins - 1, b))
        lo = b * self.bins / bins
        hi = (b + 1) * self.bins / bins
        mass = 0.0
        for i in range(int(math.floor(lo)), min(int(math.ceil(hi)), self.bins)):
            overlap = min(hi, i + 1) - max(lo, i)
            if overlap > 0:
                mass += overlap * self.hist_bin_prob(i)
        return mass

    def log_density(self, theta: float) -> float:
        return math.log(self.hist_density(theta))

    def merge(self, other: "DirHistogram") -> None:
        """Add the counts of another histogram with the same bin count."""
        if other.bins != self.bins:
            raise ValueError(
                "Cannot merge histograms with {} and {} bins.".format(
                    self.bins, other.bins
                )
            )
        self.counts = [a + b for a, b in zip(self.counts, other.counts)]
        self.total += other.total

    def to_dict(self) -> dict:
        return {"bins": self.bins, "counts": list(self.counts)}

    @classmethod
    def from_dict(cls, data: dict) -> "DirHistogram":
        h = cls(data["bins"])
        counts = [int(c) for c in data["counts"]]
        if len(counts) != h.bins or any(c < 0 for c in counts):
            raise ValueError("counts must be {} non-negative integers.".format(h.bins))
        h.counts = counts
        h.total = sum(counts)
        return h

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return self.bins == other.bins and self.counts == other.counts

    def __str__(self):
        return "<DirHistogram [bins={bins}, total={total}]>".format(
            bins=self.bins, total=self.total
        )
