import threading
from enum import Enum, unique
from typing import Optional, Set

import numpy as np

from .cell_key import CellKey
from .cylindrical_sample import CylindricalSample
from .dir_histogram import DirHistogram
from .exceptions import ValueError
from .fitting.fit_diagnostics import FitDiagnostics
from .reservoir_buffer import DEFAULT_CAPACITY, ReservoirBuffer
from .sw_gmm import SwGmm

__all__ = ["OwnerKind", "CellOwner", "DynamicsCell"]


@unique
class OwnerKind(Enum):
    HASH_OWNED = "hash"
    NODE_BOUND = "node"


class CellOwner:
    """Who holds a cell's dynamics: a hash box or a navigational node.

    Use :meth:`hash_owned` or :meth:`node_bound` rather than the constructor.
    """

    __slots__ = ("kind", "key", "node_id")

    def __init__(
        self, kind: OwnerKind, key: CellKey = None, node_id: int = None
    ) -> None:
        if (kind is OwnerKind.HASH_OWNED) != (key is not None) or (
            kind is OwnerKind.NODE_BOUND
        ) != (node_id is not None):
            raise ValueError("A hash owner needs a key, a node owner needs a node id.")
        self.kind: OwnerKind = kind
        self.key: Optional[CellKey] = key
        self.node_id: Optional[int] = node_id

    @classmethod
    def hash_owned(cls, key: CellKey) -> "CellOwner":
        return cls(OwnerKind.HASH_OWNED, key=CellKey(*key))

    @classmethod
    def node_bound(cls, node_id: int) -> "CellOwner":
        return cls(OwnerKind.NODE_BOUND, node_id=int(node_id))

    @property
    def is_bound(self) -> bool:
        return self.kind is OwnerKind.NODE_BOUND

    def to_dict(self) -> dict:
        if self.is_bound:
            return {"kind": self.kind.value, "node_id": self.node_id}
        return {"kind": self.kind.value, "key": list(self.key)}

    @classmethod
    def from_dict(cls, data: dict) -> "CellOwner":
        kind = OwnerKind(data["kind"])
        if kind is OwnerKind.NODE_BOUND:
            return cls.node_bound(data["node_id"])
        return cls.hash_owned(CellKey(*data["key"]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.kind == other.kind
            and self.key == other.key
            and self.node_id == other.node_id
        )

    def __str__(self):
        if self.is_bound:
            return "<CellOwner [node_id={}]>".format(self.node_id)
        return "<CellOwner [key={}]>".format(self.key)


class DynamicsCell:
    """The motion statistics of one region: a reservoir, a histogram and the latest mixture.

    ``histogram`` counts every observation; ``fit_histogram`` counts only the
    buffer entries the latest mixture was fitted on.

    ``keys`` lists every hash box whose observations this cell holds. A
    hash-owned cell covers exactly its own box; a bound cell covers the boxes
    of every cell merged into it.

    :param owner: who holds this cell
    :param capacity: reservoir capacity
    :param histogram_bins: bin count of the baseline histogram
    """

    def __init__(
        self,
        owner: CellOwner,
        capacity: int = DEFAULT_CAPACITY,
        histogram_bins: int = 8,
    ) -> None:
        self.owner: CellOwner = owner
        self.buffer: ReservoirBuffer = ReservoirBuffer(capacity)
        self.histogram: DirHistogram = DirHistogram(histogram_bins)
        self.model: Optional[SwGmm] = None
        self.fit_histogram: Optional[DirHistogram] = None
        self.diagnostics: Optional[FitDiagnostics] = None
        self.last_fit_time: Optional[float] = None
        self.seen_at_fit: int = 0
        # wall-clock, never serialized
        self.last_fit_seconds: Optional[float] = None
        self.keys: Set[CellKey] = set()
        if owner.key is not None:
            self.keys.add(owner.key)
        self.lock: threading.Lock = threading.Lock()

    @property
    def total_seen(self) -> int:
        return self.buffer.total_seen

    @property
    def dirty(self) -> bool:
        """Whether the buffer changed since the last fit."""
        return self.buffer.total_seen != self.seen_at_fit

    def observe(self, z: CylindricalSample, rng: np.random.Generator) -> None:
        with self.lock:
            self.buffer.push(z, rng)
            self.histogram.hist_observe(z.theta)

    def absorb(self, other: "DynamicsCell", rng: np.random.Generator) -> None:
        """Take over the observations of ``other``, which must not be used afterwards.

        The current model is kept until the next refit.
        """
        with self.lock:
            self.buffer = ReservoirBuffer.merge(self.buffer, other.buffer, rng)
            self.histogram.merge(other.histogram)
            self.keys |= other.keys
            if self.model is None and other.model is not None:
                self.model = other.model
                self.fit_histogram = other.fit_histogram
                self.diagnostics = other.diagnostics

    def record_fit(
        self,
        model: SwGmm,
        diagnostics: FitDiagnostics,
        seen: int,
        now: float,
        fit_seconds: float = 0.0,
        fit_histogram: DirHistogram = None,
    ) -> None:
        with self.lock:
            self.model = model
            self.fit_histogram = fit_histogram
            self.diagnostics = diagnostics
            self.seen_at_fit = seen
            self.last_fit_time = now
            self.last_fit_seconds = fit_seconds

    def to_dict(self) -> dict:
        return {
            "owner": self.owner.to_dict(),
            "keys": sorted(list(k) for k in self.keys),
            "buffer": self.buffer.to_dict(),
            "histogram": self.histogram.to_dict(),
            "model": self.model.to_dict() if self.model else None,
            "fit_histogram": self.fit_histogram.to_dict() if self.fit_histogram else None,
            "diagnostics": self.diagnostics.to_dict() if self.diagnostics else None,
            "last_fit_time": self.last_fit_time,
            "seen_at_fit": self.seen_at_fit,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DynamicsCell":
        buffer = ReservoirBuffer.from_dict(data["buffer"])
        histogram = DirHistogram.from_dict(data["histogram"])
        cell = cls(CellOwner.from_dict(data["owner"]), buffer.capacity, histogram.bins)
        cell.buffer = buffer
        cell.histogram = histogram
        cell.keys = {CellKey(*k) for k in data["keys"]}
        if data.get("model"):
            cell.model = SwGmm.from_dict(data["model"])
        if data.get("fit_histogram"):
            cell.fit_histogram = DirHistogram.from_dict(data["fit_histogram"])
        if data.get("diagnostics"):
            cell.diagnostics = FitDiagnostics.from_dict(data["diagnostics"])
        cell.last_fit_time = data.get("last_fit_time")
        cell.seen_at_fit = data.get("seen_at_fit", 0)
        return cell

    def __str__(self):
        return "<DynamicsCell [owner={owner}, total_seen={seen}, k={k}]>".format(
            owner=self.owner,
            seen=self.total_seen,
            k=self.model.k if self.model else None,
        )
