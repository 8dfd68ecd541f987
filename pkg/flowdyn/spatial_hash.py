import threading
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from .cell_key import CellKey, key_of
from .cylindrical_sample import CylindricalSample
from .dynamics_cell import CellOwner, DynamicsCell
from .exceptions import ValueError
from .position import Position3
from .reservoir_buffer import DEFAULT_CAPACITY

__all__ = ["SparseCellMap"]


class SparseCellMap:
    """Hash-owned dynamics cells keyed by quantized position.

    A cell exists only once an observation fell into its box. Inserting new
    cells is synchronized; observations of one cell are serialized by the
    cell's own lock.

    :param resolution: box side in meters
    :param capacity: reservoir capacity of new cells
    :param histogram_bins: histogram bin count of new cells
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``resolution`` is not positive.
    """

    def __init__(
        self,
        resolution: float,
        capacity: int = DEFAULT_CAPACITY,
        histogram_bins: int = 8,
    ) -> None:
        if not resolution > 0:
            raise ValueError("resolution must be > 0, got {}.".format(resolution))
        self.resolution: float = float(resolution)
        self.capacity: int = capacity
        self.histogram_bins: int = histogram_bins
        self.cells: Dict[CellKey, DynamicsCell] = {}
        self._lock = threading.Lock()

    def key_of(self, p: Position3) -> CellKey:
        return key_of(p, self.resolution)

    def new_cell(self, key: CellKey) -> DynamicsCell:
        """An empty hash-owned cell with this map's settings."""
        return DynamicsCell(
            CellOwner.hash_owned(key), self.capacity, self.histogram_bins
        )

    def cell_at(self, key: CellKey) -> DynamicsCell:
        """The cell for ``key``, created empty if absent."""
        with self._lock:
            cell = self.cells.get(key)
            if cell is None:
                cell = self.new_cell(key)
                self.cells[key] = cell
            return cell

    def observe(
        self, p: Position3, z: CylindricalSample, rng: np.random.Generator
    ) -> CellKey:
        """Record an observation in the cell containing ``p``.

        :param p: where the motion was observed
        :param z: the observed heading and speed
        :param rng: source of the reservoir draw
        :return: the key of the cell that received ``z``
        """
        key = self.key_of(p)
        self.cell_at(key).observe(z, rng)
        return key

    def get(self, key: CellKey) -> Optional[DynamicsCell]:
        return self.cells.get(key)

    def pop(self, key: CellKey) -> DynamicsCell:
        with self._lock:
            return self.cells.pop(key)

    def put(self, key: CellKey, cell: DynamicsCell) -> None:
        with self._lock:
            self.cells[key] = cell

    def items(self) -> List[Tuple[CellKey, DynamicsCell]]:
        """Cells in key order."""
        with self._lock:
            return sorted(self.cells.items())

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, key: CellKey) -> bool:
        return key in self.cells

    def __iter__(self) -> Iterator[CellKey]:
        return iter(sorted(self.cells))

    def __str__(self):
        return "<SparseCellMap [resolution={resolution}, cells={cells}]>".format(
            resolution=self.resolution, cells=len(self.cells)
        )
