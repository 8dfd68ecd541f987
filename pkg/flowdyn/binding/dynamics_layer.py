import logging
import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np

from .stability_tracker import StabilityTracker
from ..cell_key import CellKey, box_center
from ..cylindrical_sample import CylindricalSample
from ..dir_histogram import DirHistogram
from ..dynamics_cell import CellOwner, DynamicsCell
from ..exceptions import FlowDynError, ValueError
from ..fitting.base_fitter import BaseFitter
from ..position import Position3
from ..reservoir_buffer import DEFAULT_CAPACITY
from ..scene_graph.layered_graph import LayeredGraph
from ..scene_graph.notifications import BindingNotification, NodeMoved, NodeRemoved
from ..scene_graph.pose_event import PoseEvent
from ..spatial_hash import SparseCellMap
from ..sw_gmm import SwGmm

__all__ = ["DynamicsLayer", "cell_seed"]

logger = logging.getLogger(__name__)


def cell_seed(base_seed: int, label: str) -> int:
    """Seed of the fit of one cell, independent of the order cells are fitted in."""
    seq = np.random.SeedSequence([base_seed, zlib.crc32(label.encode("utf-8"))])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


class DynamicsLayer:
    """Motion statistics of a scene, owned by hash boxes or navigational nodes.

    Observations land in the hash cell of their box until the graph has been
    stable for the tracker's window. Binding then hands every hash cell to the
    nearest alive navigational node, merging cells that pick the same node.
    A bound cell keeps receiving the observations of every box it covers and
    stays with its node when the node moves. When the node is removed the cell
    reverts to the hash box under the node's last position.

    :param graph: the scene graph whose navigational nodes own dynamics
    :param resolution: hash box side in meters
    :param tracker: stabilization gate, a default :class:`StabilityTracker` if omitted
    :param capacity: reservoir capacity of every cell
    :param histogram_bins: bins of every cell's baseline histogram
    :param min_fit_samples: cells holding fewer entries are not fitted
    :param seed: seed of the reservoir and merge draws
    """

    def __init__(
        self,
        graph: LayeredGraph,
        resolution: float,
        tracker: StabilityTracker = None,
        capacity: int = DEFAULT_CAPACITY,
        histogram_bins: int = 8,
        min_fit_samples: int = 10,
        seed: int = 0,
    ) -> None:
        if min_fit_samples < 1:
            raise ValueError("min_fit_samples must be >= 1, got {}.".format(min_fit_samples))
        self.graph: LayeredGraph = graph
        self.tracker: StabilityTracker = tracker or StabilityTracker()
        self.hash_cells: SparseCellMap = SparseCellMap(resolution, capacity, histogram_bins)
        self.bound: Dict[int, DynamicsCell] = {}
        self.min_fit_samples: int = min_fit_samples
        self._key_owner: Dict[CellKey, int] = {}
        self._rng: np.random.Generator = np.random.default_rng(seed)

    @property
    def resolution(self) -> float:
        return self.hash_cells.resolution

    def observe(self, p: Position3, z: CylindricalSample) -> CellKey:
        """Route an observation to the cell covering its box.

        :return: the box key of ``p``
        """
        key = self.hash_cells.key_of(p)
        owner = self._key_owner.get(key)
        if owner is not None:
            self.bound[owner].observe(z, self._rng)
        else:
            self.hash_cells.cell_at(key).observe(z, self._rng)
        return key

    def try_bind(self, now: float) -> int:
        """Hand every hash cell to its nearest alive navigational node once the graph is stable.

        :param now: current time in seconds
        :return: number of cells transferred
        """
        if not self.tracker.is_stable(now):
            return 0
        items = self.hash_cells.items()
        if not items:
            return 0
        targets = self.graph.nearest_alive(
            [box_center(key, self.resolution) for key, _ in items]
        )
        transfers = 0
        for (key, cell), node_id in zip(items, targets):
            if node_id is None:
                continue
            self.hash_cells.pop(key)
            self._bind(cell, node_id)
            transfers += 1
        if transfers:
            logger.info("Bound %d cells at t=%.3f.", transfers, now)
        return transfers

    def _bind(self, cell: DynamicsCell, node_id: int) -> None:
        existing = self.bound.get(node_id)
        if existing is None:
            cell.owner = CellOwner.node_bound(node_id)
            self.bound[node_id] = cell
            self.graph.attach_dynamics(node_id)
        else:
            existing.absorb(cell, self._rng)
            cell = existing
        for key in cell.keys:
            self._key_owner[key] = node_id

    def on_node_moved(self, node_id: int, new_position: Position3) -> None:
        """Dynamics stay with the node id, whatever its position."""
        if node_id in self.bound:
            logger.debug("Node %d moved to %s with its dynamics.", node_id, new_position)

    def on_node_removed(self, node_id: int, node_last_position: Position3) -> None:
        """Revert the node's cell to the hash box under its last position.

        The reverted cell merges with a hash cell already at that box.
        """
        cell = self.bound.pop(node_id, None)
        if cell is None:
            return
        self.graph.detach_dynamics(node_id)
        for key in cell.keys:
            if self._key_owner.get(key) == node_id:
                del self._key_owner[key]
        key = self.hash_cells.key_of(node_last_position)
        cell.owner = CellOwner.hash_owned(key)
        cell.keys = {key}
        existing = self.hash_cells.get(key)
        if existing is None:
            self.hash_cells.put(key, cell)
        else:
            existing.absorb(cell, self._rng)
        logger.info("Node %d removed, its dynamics reverted to box %s.", node_id, key)

    def handle(self, notification: BindingNotification, now: float) -> None:
        self.tracker.notify(notification, now)
        if isinstance(notification, NodeMoved):
            self.on_node_moved(notification.node_id, notification.new_position)
        elif isinstance(notification, NodeRemoved):
            self.on_node_removed(notification.node_id, notification.last_position)

    def apply_event(self, ev: PoseEvent) -> None:
        """Apply a pose event to the graph and react to its notifications."""
        for notification in self.graph.apply_event(ev):
            self.handle(notification, ev.time)

    def cells(self) -> List[Tuple[str, DynamicsCell]]:
        """Every cell with a stable label, bound cells first, each group in order."""
        labelled = [("node:{}".format(i), c) for i, c in sorted(self.bound.items())]
        labelled += [("hash:{}".format(k), c) for k, c in self.hash_cells.items()]
        return labelled

    def _due(self, cell: DynamicsCell, interval: float, now: float) -> bool:
        if not cell.dirty or len(cell.buffer) < self.min_fit_samples:
            return False
        return cell.last_fit_time is None or now - cell.last_fit_time >= interval

    def _refit(
        self, label: str, cell: DynamicsCell, fitter: BaseFitter, now: float
    ) -> bool:
        with cell.lock:
            samples = cell.buffer.snapshot()
            seen = cell.buffer.total_seen
        seeded = fitter.with_seed(cell_seed(fitter.config.rng_seed, label))
        try:
            result = seeded.fit(samples)
        except FlowDynError as e:
            logger.warning("Fit of cell %s failed, keeping its previous model: %s", label, e)
            return False
        fitted_on = DirHistogram.of_headings((z.theta for z in samples), cell.histogram.bins)
        cell.record_fit(
            result.model, result.diagnostics, seen, now, result.fit_seconds, fitted_on
        )
        logger.debug("Refitted cell %s in %.4fs.", label, result.fit_seconds)
        return True

    def update_models(
        self, fitter: BaseFitter, interval: float, now: float, parallelism: int = 1
    ) -> int:
        """Refit every due cell from a snapshot of its buffer.

        A cell is due when its buffer changed since its last fit, holds at
        least ``min_fit_samples`` entries and was not fitted within the last
        ``interval`` seconds. Every cell is fitted with its own seed derived
        from the fitter's seed and the cell label, so serial and parallel
        updates agree.

        :param fitter: the model selection to run
        :param interval: seconds between two fits of one cell
        :param now: current time in seconds
        :param parallelism: worker threads, 1 fits serially
        :return: number of cells refitted
        """
        if parallelism < 1:
            raise ValueError("parallelism must be >= 1, got {}.".format(parallelism))
        due = [(label, c) for label, c in self.cells() if self._due(c, interval, now)]
        if not due:
            return 0
        if parallelism == 1:
            outcomes = [self._refit(label, c, fitter, now) for label, c in due]
        else:
            with ThreadPoolExecutor(max_workers=parallelism) as pool:
                outcomes = list(
                    pool.map(lambda item: self._refit(item[0], item[1], fitter, now), due)
                )
        refitted = sum(outcomes)
        logger.info("Refitted %d of %d due cells at t=%.3f.", refitted, len(due), now)
        return refitted

    def lookup(self, p: Position3) -> Optional[DynamicsCell]:
        """The bound cell covering the box of ``p``, ``None`` if uncovered."""
        owner = self._key_owner.get(self.hash_cells.key_of(p))
        return None if owner is None else self.bound[owner]

    def lookup_model(self, p: Position3) -> Optional[SwGmm]:
        cell = self.lookup(p)
        return None if cell is None else cell.model

    def owner_of(self, key: CellKey) -> Optional[int]:
        return self._key_owner.get(key)

    def total_seen(self) -> int:
        """Observations ever received, summed over all cells."""
        return sum(c.total_seen for _, c in self.cells())

    def to_dict(self) -> dict:
        return {
            "resolution": self.resolution,
            "min_fit_samples": self.min_fit_samples,
            "tracker": {
                "window": self.tracker.window,
                "significance_threshold": self.tracker.significance_threshold,
                "last_significant_update": self.tracker.last_significant_update,
            },
            "bound": [
                {"node_id": i, "cell": c.to_dict()} for i, c in sorted(self.bound.items())
            ],
            "hash": [c.to_dict() for _, c in self.hash_cells.items()],
        }

    @classmethod
    def from_dict(
        cls, data: dict, graph: LayeredGraph, capacity: int, histogram_bins: int
    ) -> "DynamicsLayer":
        layer = cls(
            graph,
            data["resolution"],
            StabilityTracker(**data["tracker"]),
            capacity,
            histogram_bins,
            data["min_fit_samples"],
        )
        for item in data["bound"]:
            cell = DynamicsCell.from_dict(item["cell"])
            layer.bound[item["node_id"]] = cell
            for key in cell.keys:
                layer._key_owner[key] = item["node_id"]
        for item in data["hash"]:
            cell = DynamicsCell.from_dict(item)
            layer.hash_cells.put(cell.owner.key, cell)
        return layer

    def __str__(self):
        return "<DynamicsLayer [resolution={resolution}, bound={bound}, hash={hash}]>".format(
            resolution=self.resolution, bound=len(self.bound), hash=len(self.hash_cells)
        )
