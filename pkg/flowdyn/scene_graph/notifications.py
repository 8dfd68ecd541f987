from ..position import Position3

__all__ = ["BindingNotification", "NodeAdded", "NodeMoved", "NodeRemoved"]


class BindingNotification:
    """Something happened to a navigational node that the dynamics layer must know about."""

    def __init__(self, node_id: int) -> None:
        self.node_id: int = node_id

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return self.__dict__ == other.__dict__


class NodeAdded(BindingNotification):
    def __init__(self, node_id: int, position: Position3) -> None:
        super().__init__(node_id)
        self.position: Position3 = position

    def __str__(self):
        return "<NodeAdded [node_id={}, position={}]>".format(self.node_id, self.position)


class NodeMoved(BindingNotification):
    def __init__(
        self, node_id: int, old_position: Position3, new_position: Position3
    ) -> None:
        super().__init__(node_id)
        self.old_position: Position3 = old_position
        self.new_position: Position3 = new_position

    @property
    def displacement(self) -> float:
        return self.old_position.distance_to(self.new_position)

    def __str__(self):
        return "<NodeMoved [node_id={}, old_position={}, new_position={}]>".format(
            self.node_id, self.old_position, self.new_position
        )


class NodeRemoved(BindingNotification):
    def __init__(self, node_id: int, last_position: Position3) -> None:
        super().__init__(node_id)
        self.last_position: Position3 = last_position

    def __str__(self):
        return "<NodeRemoved [node_id={}, last_position={}]>".format(
            self.node_id, self.last_position
        )
