import logging
import math
from enum import Enum, unique
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .nav_node import NavNode
from .notifications import BindingNotification, NodeAdded, NodeMoved, NodeRemoved
from .pose_event import PoseEvent, PoseEventKind
from ..exceptions import DuplicateNodeError, UnknownNodeError, ValueError
from ..position import Position3

__all__ = ["Layer", "LayeredGraph", "Bounds"]

logger = logging.getLogger(__name__)

Bounds = Tuple[Tuple[float, float], Tuple[float, float]]

_NEAREST_CHUNK = 512


@unique
class Layer(Enum):
    NAVIGATIONAL = "navigational"
    DYNAMICS = "dynamics"


class LayeredGraph:
    """A scene graph reduced to a navigational layer and a dynamics layer.

    A dynamics node is identified by its parent navigational node, so every
    dynamics node has exactly one parent edge. Removing a navigational node
    detaches its dynamics node in the same step.
    """

    def __init__(self) -> None:
        self.nodes: Dict[int, NavNode] = {}
        self.dynamics_parents: Set[int] = set()

    @classmethod
    def build_nav_layer(cls, bounds: Bounds, node_spacing: float) -> "LayeredGraph":
        """Place navigational nodes at the centers of a regular grid.

        Nodes are numbered row by row from the lower left corner.

        :param bounds: ``((x_min, y_min), (x_max, y_max))`` in meters
        :param node_spacing: grid pitch in meters
        :return: a graph with ``ceil(width / spacing) * ceil(height / spacing)`` nodes
        :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if the spacing is not positive or the bounds are empty.
        """
        if not (math.isfinite(node_spacing) and node_spacing > 0):
            raise ValueError("node_spacing must be > 0, got {}.".format(node_spacing))
        (x_min, y_min), (x_max, y_max) = bounds
        width, height = x_max - x_min, y_max - y_min
        if not (width > 0 and height > 0):
            raise ValueError("Bounds {} enclose no area.".format(bounds))
        nx = math.ceil(round(width / node_spacing, 9))
        ny = math.ceil(round(height / node_spacing, 9))
        graph = cls()
        for j in range(ny):
            for i in range(nx):
                node_id = j * nx + i
                graph.nodes[node_id] = NavNode(
                    node_id,
                    Position3(
                        x_min + (i + 0.5) * node_spacing,
                        y_min + (j + 0.5) * node_spacing,
                    ),
                )
        logger.debug("Built %d navigational nodes at %.3f m spacing.", nx * ny, node_spacing)
        return graph

    def alive_nodes(self) -> List[NavNode]:
        """Alive navigational nodes in id order."""
        return [n for _, n in sorted(self.nodes.items()) if n.alive]

    def node(self, node_id: int) -> NavNode:
        """The alive node ``node_id``.

        :raises: :exc:`UnknownNodeError <flowdyn.exceptions.UnknownNodeError>`
        """
        node = self.nodes.get(node_id)
        if node is None or not node.alive:
            raise UnknownNodeError("No alive navigational node {}.".format(node_id))
        return node

    def layer_of(self, node_id: int, dynamics: bool = False) -> Optional[Layer]:
        """The layer holding the navigational node, or its dynamics child when ``dynamics`` is set."""
        if dynamics:
            return Layer.DYNAMICS if node_id in self.dynamics_parents else None
        node = self.nodes.get(node_id)
        return Layer.NAVIGATIONAL if node is not None and node.alive else None

    def attach_dynamics(self, node_id: int) -> None:
        """Add the dynamics node hanging off ``node_id``."""
        self.node(node_id)
        self.dynamics_parents.add(node_id)

    def detach_dynamics(self, node_id: int) -> None:
        self.dynamics_parents.discard(node_id)

    def apply_event(self, ev: PoseEvent) -> List[BindingNotification]:
        """Apply a pose event.

        :param ev: the event
        :return: the notifications for the dynamics layer
        :raises:
            | :exc:`DuplicateNodeError <flowdyn.exceptions.DuplicateNodeError>`: if an added id was ever used.
            | :exc:`UnknownNodeError <flowdyn.exceptions.UnknownNodeError>`: if a moved or removed id is not alive.
        """
        if ev.kind is PoseEventKind.ADD:
            if ev.node_id in self.nodes:
                raise DuplicateNodeError(
                    "Navigational node {} already exists or existed.".format(ev.node_id)
                )
            self.nodes[ev.node_id] = NavNode(ev.node_id, ev.position)
            return [NodeAdded(ev.node_id, ev.position)]
        node = self.node(ev.node_id)
        if ev.kind is PoseEventKind.MOVE:
            old = node.position
            node.position = ev.position
            return [NodeMoved(ev.node_id, old, ev.position)]
        node.alive = False
        self.detach_dynamics(ev.node_id)
        return [NodeRemoved(ev.node_id, node.position)]

    def nearest_alive(self, points: Sequence[Position3]) -> List[Optional[int]]:
        """Id of the nearest alive node to every point, ``None`` without alive nodes.

        Ties go to the smaller id.
        """
        alive = self.alive_nodes()
        if not alive:
            return [None] * len(points)
        ids = np.array([n.node_id for n in alive])
        coords = np.array([n.position.as_tuple() for n in alive])
        query = np.array([p.as_tuple() for p in points], dtype=float).reshape(-1, 3)
        nearest: List[Optional[int]] = []
        for start in range(0, query.shape[0], _NEAREST_CHUNK):
            block = query[start : start + _NEAREST_CHUNK]
            d2 = ((block[:, None, :] - coords[None, :, :]) ** 2).sum(axis=2)
            nearest.extend(int(i) for i in ids[np.argmin(d2, axis=1)])
        return nearest

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for _, n in sorted(self.nodes.items())],
            "dynamics_parents": sorted(self.dynamics_parents),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LayeredGraph":
        graph = cls()
        for item in data["nodes"]:
            node = NavNode.from_dict(item)
            graph.nodes[node.node_id] = node
        graph.dynamics_parents = set(data.get("dynamics_parents", []))
        return graph

    def __len__(self) -> int:
        return len(self.alive_nodes())

    def __str__(self):
        return "<LayeredGraph [alive_nodes={alive}, dynamics_nodes={dyn}]>".format(
            alive=len(self), dyn=len(self.dynamics_parents)
        )
