import json
from typing import Tuple

from .binding.dynamics_layer import DynamicsLayer
from .dir_histogram import DENSITY_FLOOR
from .evaluation.metrics import CONTINUOUS_DENSITY_FLOOR
from .exceptions import BuildInValueError, ParseError
from .run_config import RunConfig
from .scene_graph.layered_graph import LayeredGraph

__all__ = ["snapshot_to_dict", "snapshot_from_dict", "write_snapshot", "read_snapshot"]

SNAPSHOT_FORMAT = "flowdyn-snapshot"
SNAPSHOT_VERSION = 1

UNITS = {"position": "m", "theta": "rad", "rho": "m/s", "time": "s", "resolution": "m"}


def snapshot_to_dict(layer: DynamicsLayer, run_config: RunConfig) -> dict:
    """Everything needed to evaluate or draw a layer without its inputs."""
    return {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "units": UNITS,
        "run_config": run_config.to_dict(),
        "resolution": layer.resolution,
        "significance_threshold": layer.tracker.significance_threshold,
        "density_floors": {
            "histogram": DENSITY_FLOOR,
            "continuous": CONTINUOUS_DENSITY_FLOOR,
        },
        "total_seen": layer.total_seen(),
        "graph": layer.graph.to_dict(),
        "dynamics": layer.to_dict(),
    }


def snapshot_from_dict(data: dict) -> Tuple[DynamicsLayer, RunConfig]:
    """Inverse of :func:`snapshot_to_dict`.

    :raises: :exc:`ParseError <flowdyn.exceptions.ParseError>`: if this is not a snapshot of a known version.
    """
    if data.get("format") != SNAPSHOT_FORMAT or data.get("version") != SNAPSHOT_VERSION:
        raise ParseError(
            "Not a {} v{} file.".format(SNAPSHOT_FORMAT, SNAPSHOT_VERSION)
        )
    run_config = RunConfig.from_dict(data["run_config"])
    graph = LayeredGraph.from_dict(data["graph"])
    layer = DynamicsLayer.from_dict(
        data["dynamics"], graph, run_config.reservoir_capacity, run_config.histogram_bins
    )
    return layer, run_config


def write_snapshot(layer: DynamicsLayer, run_config: RunConfig, path: str) -> None:
    """Write a snapshot as sorted, indented JSON so equal layers give equal files."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(snapshot_to_dict(layer, run_config), sort_keys=True, indent=2))
        f.write("\n")


def read_snapshot(path: str) -> Tuple[DynamicsLayer, RunConfig]:
    """Read a snapshot written by :func:`write_snapshot`.

    :raises: :exc:`ParseError <flowdyn.exceptions.ParseError>`: on malformed JSON or content.
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno)
    try:
        return snapshot_from_dict(data)
    except (KeyError, TypeError, BuildInValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError("Malformed snapshot: {}".format(e))
