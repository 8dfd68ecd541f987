import math
from typing import NamedTuple

from .exceptions import ValueError
from .position import Position3

__all__ = ["CellKey", "key_of", "box_center"]


class CellKey(NamedTuple):
    """Floor-quantized integer coordinates of a box of side ``resolution``."""

    ix: int
    iy: int
    iz: int

    def __str__(self):
        return "{}_{}_{}".format(self.ix, self.iy, self.iz)

    @classmethod
    def parse(cls, text: str) -> "CellKey":
        """Inverse of ``str(key)``."""
        parts = text.split("_")
        if len(parts) != 3 or not all(p.lstrip("-").isdigit() for p in parts):
            raise ValueError("Invalid cell key {!r}.".format(text))
        return cls(*(int(p) for p in parts))


def _check_resolution(resolution: float) -> None:
    if not (math.isfinite(resolution) and resolution > 0):
        raise ValueError("resolution must be > 0, got {}.".format(resolution))


def key_of(p: Position3, resolution: float) -> CellKey:
    """Quantize a position to the key of the box containing it.

    Uses the mathematical floor, so ``-0.01`` at ``0.5`` resolution maps to ``-1``.

    :param p: the position
    :param resolution: box side in meters
    :return: the key of the box
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``resolution`` is not positive.
    """
    _check_resolution(resolution)
    return CellKey(
        math.floor(p.x / resolution),
        math.floor(p.y / resolution),
        math.floor(p.z / resolution),
    )


def box_center(key: CellKey, resolution: float) -> Position3:
    """Center of the box ``key`` names."""
    _check_resolution(resolution)
    return Position3(
        (key.ix + 0.5) * resolution,
        (key.iy + 0.5) * resolution,
        (key.iz + 0.5) * resolution,
    )
