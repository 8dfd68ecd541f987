import math
from typing import Tuple

from .exceptions import ValueError

__all__ = ["Position3"]


class Position3:
    """A point in the map frame.

    :param x: meters
    :param y: meters
    :param z: meters
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if a coordinate is not finite.
    """

    __slots__ = ("x", "y", "z")

    def __init__(self, x: float, y: float, z: float = 0.0) -> None:
        x, y, z = float(x), float(y), float(z)
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise ValueError(
                "Position coordinates must be finite, got ({}, {}, {}).".format(x, y, z)
            )
        self.x: float = x
        self.y: float = y
        self.z: float = z

    def distance_to(self, other: "Position3") -> float:
        """Euclidean distance to ``other`` in meters."""
        return math.sqrt(
            (self.x - other.x) ** 2 + (self.y - other.y) ** 2 + (self.z - other.z) ** 2
        )

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.x, self.y, self.z

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "z": self.z}

    @classmethod
    def from_dict(cls, data: dict) -> "Position3":
        return cls(data["x"], data["y"], data.get("z", 0.0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __str__(self):
        return "<Position3 [x={x}, y={y}, z={z}]>".format(x=self.x, y=self.y, z=self.z)
