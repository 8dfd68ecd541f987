import math

from .angles import wrap_angle
from .exceptions import ValueError

__all__ = ["CylindricalSample"]


class CylindricalSample:
    """One motion observation on the orientation-speed cylinder.

    The heading is wrapped into ``[-pi, pi)`` on construction.

    :param theta: heading in radians
    :param rho: speed in m/s, must be >= 0
    :param timestamp: seconds, only used to order replays
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``rho`` is negative or a field is not finite.
    """

    __slots__ = ("theta", "rho", "timestamp")

    def __init__(self, theta: float, rho: float, timestamp: float = 0.0) -> None:
        rho = float(rho)
        if not math.isfinite(rho) or rho < 0:
            raise ValueError("rho must be a finite speed >= 0, got {}.".format(rho))
        if not math.isfinite(timestamp):
            raise ValueError("timestamp must be finite, got {}.".format(timestamp))
        self.theta: float = wrap_angle(float(theta))
        self.rho: float = rho
        self.timestamp: float = float(timestamp)

    def to_dict(self) -> dict:
        return {"theta": self.theta, "rho": self.rho, "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, data: dict) -> "CylindricalSample":
        return cls(data["theta"], data["rho"], data.get("timestamp", 0.0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.theta == other.theta
            and self.rho == other.rho
            and self.timestamp == other.timestamp
        )

    def __hash__(self):
        return hash((self.theta, self.rho, self.timestamp))

    def __str__(self):
        return "<CylindricalSample [theta={theta}, rho={rho}, timestamp={timestamp}]>".format(
            theta=self.theta, rho=self.rho, timestamp=self.timestamp
        )
