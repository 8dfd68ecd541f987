import csv
import math
from typing import Iterable, List, TextIO

from ..angles import wrap_angle
from ..cylindrical_sample import CylindricalSample
from ..exceptions import BuildInValueError, ParseError, ValueError
from ..position import Position3

__all__ = ["Detection", "read_detections", "write_detections", "DETECTION_HEADER"]

DETECTION_HEADER = "# flowdyn-detections v1"
COLUMNS = ["time", "agent_id", "x", "y", "z", "theta", "rho"]
_PRECISION = "{:.9f}"


class Detection:
    """A perfect detection of one agent.

    :param time: seconds
    :param agent_id: which agent was seen
    :param position: where, z is 0 for planar scenes
    :param theta: heading in radians, wrapped on construction
    :param rho: speed in m/s
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``rho`` is negative or a value is not finite.
    """

    __slots__ = ("time", "agent_id", "position", "theta", "rho")

    def __init__(
        self, time: float, agent_id: int, position: Position3, theta: float, rho: float
    ) -> None:
        if not math.isfinite(time):
            raise ValueError("time must be finite, got {}.".format(time))
        if not (math.isfinite(rho) and rho >= 0):
            raise ValueError("rho must be a finite speed >= 0, got {}.".format(rho))
        self.time: float = float(time)
        self.agent_id: int = int(agent_id)
        self.position: Position3 = position
        self.theta: float = wrap_angle(float(theta))
        self.rho: float = float(rho)

    @property
    def sample(self) -> CylindricalSample:
        return CylindricalSample(self.theta, self.rho, self.time)

    def to_row(self) -> List[str]:
        return [
            _PRECISION.format(self.time),
            str(self.agent_id),
            _PRECISION.format(self.position.x),
            _PRECISION.format(self.position.y),
            _PRECISION.format(self.position.z),
            _PRECISION.format(self.theta),
            _PRECISION.format(self.rho),
        ]

    @classmethod
    def from_row(cls, row: List[str], line_number: int = None) -> "Detection":
        """Parse one CSV row.

        :raises: :exc:`ParseError <flowdyn.exceptions.ParseError>`: if the row is malformed.
        """
        if len(row) != len(COLUMNS):
            raise ParseError(
                "Expected {} columns, got {}.".format(len(COLUMNS), len(row)), line_number
            )
        try:
            t, agent, x, y, z, theta, rho = row
            return cls(
                float(t),
                int(agent),
                Position3(float(x), float(y), float(z)),
                float(theta),
                float(rho),
            )
        except BuildInValueError as e:
            raise ParseError(str(e), line_number)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.time == other.time
            and self.agent_id == other.agent_id
            and self.position == other.position
            and self.theta == other.theta
            and self.rho == other.rho
        )

    def __str__(self):
        return "<Detection [time={time}, agent_id={agent}, position={position}, theta={theta}, rho={rho}]>".format(
            time=self.time,
            agent=self.agent_id,
            position=self.position,
            theta=self.theta,
            rho=self.rho,
        )


def write_detections(detections: Iterable[Detection], out: TextIO) -> None:
    """Write a detection stream: the version header, a column header, one row per detection."""
    out.write(DETECTION_HEADER + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    for d in detections:
        writer.writerow(d.to_row())


def read_detections(source: TextIO) -> List[Detection]:
    """Read a detection stream written by :func:`write_detections`.

    :raises: :exc:`ParseError <flowdyn.exceptions.ParseError>`: on a missing header,
        a malformed row or a row earlier in time than its predecessor.
    """
    lines = iter(enumerate(source, start=1))
    first = next(lines, None)
    if first is None or first[1].strip() != DETECTION_HEADER:
        raise ParseError("Missing {!r} header.".format(DETECTION_HEADER), 1)
    detections: List[Detection] = []
    for line_number, line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = next(csv.reader([line]))
        if row == COLUMNS:
            continue
        d = Detection.from_row(row, line_number)
        if detections and d.time < detections[-1].time:
            raise ParseError(
                "Detection at t={} precedes the previous one at t={}.".format(
                    d.time, detections[-1].time
                ),
                line_number,
            )
        detections.append(d)
    return detections
