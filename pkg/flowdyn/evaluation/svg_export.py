import math
from typing import List, Optional

import matplotlib
from matplotlib.figure import Figure
from matplotlib.lines import Line2D
from matplotlib.patches import FancyArrowPatch

from ..binding.dynamics_layer import DynamicsLayer
from ..exceptions import ValueError
from ..scene_graph.layered_graph import Bounds

__all__ = ["FlowArrow", "flow_arrows", "export_svg", "K_COLORS"]

K_COLORS = {1: "red", 2: "green", 3: "yellow", 4: "purple", 5: "dimgray"}
FALLBACK_COLOR = "dimgray"
MAX_LINE_WIDTH = 4.0
METERS_PER_SPEED = 0.4
_HASH_SALT = "flowdyn"


class FlowArrow:
    """One mixture component drawn at its node.

    :param node_id: the owning node
    :param x: arrow tail, meters
    :param y: arrow tail, meters
    :param angle: component mean heading in radians
    :param length: meters, proportional to the component mean speed
    :param width: line width in points, proportional to the component weight
    :param opacity: proportional to the component weight
    :param color: by component count of the node's mixture
    """

    def __init__(
        self,
        node_id: int,
        x: float,
        y: float,
        angle: float,
        length: float,
        width: float,
        opacity: float,
        color: str,
    ) -> None:
        self.node_id = node_id
        self.x = x
        self.y = y
        self.angle = angle
        self.length = length
        self.width = width
        self.opacity = opacity
        self.color = color

    @property
    def head(self):
        return (
            self.x + self.length * math.cos(self.angle),
            self.y + self.length * math.sin(self.angle),
        )

    def __str__(self):
        return "<FlowArrow [node_id={}, angle={}, length={}, width={}, color={}]>".format(
            self.node_id, self.angle, self.length, self.width, self.color
        )


def flow_arrows(layer: DynamicsLayer, meters_per_speed: float = METERS_PER_SPEED) -> List[FlowArrow]:
    """Arrows of every component of every fitted bound cell, at the node's current position.

    Nodes come in id order and components in model order.
    """
    arrows = []
    for node_id, cell in sorted(layer.bound.items()):
        if cell.model is None:
            continue
        node = layer.graph.nodes[node_id]
        color = K_COLORS.get(cell.model.k, FALLBACK_COLOR)
        for comp in cell.model.components:
            arrows.append(
                FlowArrow(
                    node_id,
                    node.position.x,
                    node.position.y,
                    comp.mu_theta,
                    meters_per_speed * comp.mu_rho,
                    MAX_LINE_WIDTH * comp.weight,
                    comp.weight,
                    color,
                )
            )
    return arrows


def export_svg(
    layer: DynamicsLayer, path: str, bounds: Optional[Bounds] = None, title: str = None
) -> int:
    """Render the flow map of a layer to an SVG file.

    Identical layers give byte-identical files.

    :param layer: a layer with at least one fitted bound cell
    :param path: target file
    :param bounds: plotted area, the extent of the navigational nodes if omitted
    :param title: figure title
    :return: number of arrows drawn
    :raises:
        | :exc:`ValueError <flowdyn.exceptions.ValueError>`: if no bound cell is fitted.
        | :exc:`OSError`: if ``path`` cannot be written.
    """
    arrows = flow_arrows(layer)
    if not arrows:
        raise ValueError("Nothing to export: no bound cell has a fitted model.")
    if bounds is None:
        xs = [n.position.x for n in layer.graph.nodes.values()]
        ys = [n.position.y for n in layer.graph.nodes.values()]
        pad = layer.resolution
        bounds = ((min(xs) - pad, min(ys) - pad), (max(xs) + pad, max(ys) + pad))
    (x0, y0), (x1, y1) = bounds

    with matplotlib.rc_context({"svg.hashsalt": _HASH_SALT, "svg.fonttype": "none"}):
        fig = Figure(figsize=(max(4.0, (x1 - x0) / 2.0), max(3.0, (y1 - y0) / 2.0)))
        ax = fig.add_subplot(1, 1, 1)
        alive = layer.graph.alive_nodes()
        ax.scatter(
            [n.position.x for n in alive],
            [n.position.y for n in alive],
            s=2,
            color="lightgray",
            zorder=1,
        )
        for a in arrows:
            ax.add_patch(
                FancyArrowPatch(
                    (a.x, a.y),
                    a.head,
                    arrowstyle="-|>",
                    mutation_scale=6,
                    linewidth=a.width,
                    color=a.color,
                    alpha=a.opacity,
                    zorder=2,
                )
            )
        ax.legend(
            handles=[
                Line2D([0], [0], color=c, label="K={}".format(k)) for k, c in sorted(K_COLORS.items())
            ],
            loc="upper right",
            fontsize="small",
        )
        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
        ax.set_aspect("equal")
        ax.set_xlabel("x [m]")
        ax.set_ylabel("y [m]")
        if title:
            ax.set_title(title)
        fig.savefig(path, format="svg", metadata={"Date": None})
    return len(arrows)
