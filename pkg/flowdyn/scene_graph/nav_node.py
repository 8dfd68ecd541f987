from ..position import Position3

__all__ = ["NavNode"]


class NavNode:
    """A navigational place.

    :param node_id: unique for the lifetime of the graph
    :param position: where the place is
    :param alive: ``False`` once the node has been removed
    """

    def __init__(self, node_id: int, position: Position3, alive: bool = True) -> None:
        self.node_id: int = int(node_id)
        self.position: Position3 = position
        self.alive: bool = alive

    def to_dict(self) -> dict:
        return {
            "id": self.node_id,
            "position": self.position.to_dict(),
            "alive": self.alive,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NavNode":
        return cls(
            data["id"], Position3.from_dict(data["position"]), data.get("alive", True)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.node_id == other.node_id
            and self.position == other.position
            and self.alive == other.alive
        )

    def __str__(self):
        return "<NavNode [node_id={node_id}, position={position}, alive={alive}]>".format(
            node_id=self.node_id, position=self.position, alive=self.alive
        )
