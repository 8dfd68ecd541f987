import math
from enum import Enum, unique
from typing import Iterable, List, Optional

from ..exceptions import BuildInValueError, ParseError, ValueError
from ..position import Position3

__all__ = [
    "PoseEventKind",
    "PoseEvent",
    "parse_pose_events",
    "read_pose_events",
    "write_pose_events",
]


@unique
class PoseEventKind(Enum):
    ADD = "ADD"
    MOVE = "MOVE"
    REMOVE = "REMOVE"


class PoseEvent:
    """A scripted change of the navigational layer.

    :param time: seconds
    :param kind: what happens to the node
    :param node_id: the node concerned
    :param position: new position, required for :attr:`PoseEventKind.ADD` and :attr:`PoseEventKind.MOVE`
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``position`` does not match ``kind``.
    """

    def __init__(
        self,
        time: float,
        kind: PoseEventKind,
        node_id: int,
        position: Optional[Position3] = None,
    ) -> None:
        if not math.isfinite(time):
            raise ValueError("time must be finite, got {}.".format(time))
        if (kind is PoseEventKind.REMOVE) != (position is None):
            raise ValueError(
                "{} events {} a position.".format(
                    kind.value, "take no" if kind is PoseEventKind.REMOVE else "need"
                )
            )
        self.time: float = float(time)
        self.kind: PoseEventKind = kind
        self.node_id: int = int(node_id)
        self.position: Optional[Position3] = position

    @classmethod
    def add(cls, time: float, node_id: int, position: Position3) -> "PoseEvent":
        return cls(time, PoseEventKind.ADD, node_id, position)

    @classmethod
    def move(cls, time: float, node_id: int, position: Position3) -> "PoseEvent":
        return cls(time, PoseEventKind.MOVE, node_id, position)

    @classmethod
    def remove(cls, time: float, node_id: int) -> "PoseEvent":
        return cls(time, PoseEventKind.REMOVE, node_id)

    def to_line(self) -> str:
        """The event in the line format read by :func:`parse_pose_events`."""
        head = "t={} {} {}".format(repr(self.time), self.kind.value, self.node_id)
        if self.position is None:
            return head
        return "{} {} {} {}".format(
            head, repr(self.position.x), repr(self.position.y), repr(self.position.z)
        )

    @classmethod
    def from_line(cls, line: str, line_number: int = None) -> "PoseEvent":
        """Parse one ``t=<sec> ADD|MOVE <id> <x> <y> <z>`` or ``t=<sec> REMOVE <id>`` line.

        :raises: :exc:`ParseError <flowdyn.exceptions.ParseError>`: if the line is malformed.
        """
        fields = line.split()
        if len(fields) < 3 or not fields[0].startswith("t="):
            raise ParseError("Expected 't=<sec> <KIND> <id> ...'.", line_number)
        try:
            kind = PoseEventKind(fields[1])
        except BuildInValueError:
            raise ParseError("Unknown event kind {!r}.".format(fields[1]), line_number)
        expected = 3 if kind is PoseEventKind.REMOVE else 6
        if len(fields) != expected:
            raise ParseError(
                "{} events have {} fields, got {}.".format(kind.value, expected, len(fields)),
                line_number,
            )
        try:
            time = float(fields[0][2:])
            node_id = int(fields[2])
            position = (
                Position3(*(float(v) for v in fields[3:6])) if expected == 6 else None
            )
            return cls(time, kind, node_id, position)
        except BuildInValueError as e:
            raise ParseError(str(e), line_number)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.time == other.time
            and self.kind == other.kind
            and self.node_id == other.node_id
            and self.position == other.position
        )

    def __str__(self):
        return "<PoseEvent [time={time}, kind={kind}, node_id={node_id}, position={position}]>".format(
            time=self.time, kind=self.kind.value, node_id=self.node_id, position=self.position
        )


def parse_pose_events(lines: Iterable[str]) -> List[PoseEvent]:
    """Parse a pose-event stream, skipping blank lines and ``#`` comments.

    :raises: :exc:`ParseError <flowdyn.exceptions.ParseError>`: if a line is malformed or the stream goes back in time.
    """
    events: List[PoseEvent] = []
    for line_number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        event = PoseEvent.from_line(line, line_number)
        if events and event.time < events[-1].time:
            raise ParseError(
                "Event at t={} precedes the previous one at t={}.".format(
                    event.time, events[-1].time
                ),
                line_number,
            )
        events.append(event)
    return events


def read_pose_events(path: str) -> List[PoseEvent]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_pose_events(f)


def write_pose_events(events: Iterable[PoseEvent], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for event in events:
            f.write(event.to_line() + "\n")
