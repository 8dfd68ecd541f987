from typing import List

import numpy as np

from .cylindrical_sample import CylindricalSample
from .exceptions import CapacityMismatchError, ValueError

__all__ = ["ReservoirBuffer", "DEFAULT_CAPACITY"]

DEFAULT_CAPACITY = 200


class ReservoirBuffer:
    """Fixed-capacity uniform subsample of an unbounded observation stream.

    Every observation pushed so far is held with equal probability
    ``capacity / max(total_seen, capacity)``.

    :param capacity: the most entries ever held
    :raises: :exc:`ValueError <flowdyn.exceptions.ValueError>`: if ``capacity`` is not positive.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY) -> None:
        if capacity < 1:
            raise ValueError("capacity must be > 0, got {}.".format(capacity))
        self.capacity: int = int(capacity)
        self.entries: List[CylindricalSample] = []
        self.total_seen: int = 0

    def push(self, z: CylindricalSample, rng: np.random.Generator) -> None:
        """Offer one observation to the buffer.

        Until the buffer is full every observation is appended. Afterwards
        the ``T``-th observation replaces a uniformly chosen entry with
        probability ``capacity / T``.

        :param z: the observation
        :param rng: source of the replacement draw
        """
        self.total_seen += 1
        if len(self.entries) < self.capacity:
            self.entries.append(z)
            return
        slot = int(rng.integers(self.total_seen))
        if slot < self.capacity:
            self.entries[slot] = z

    def snapshot(self) -> List[CylindricalSample]:
        """A copy of the current entries, unaffected by later pushes."""
        return list(self.entries)

    @staticmethod
    def merge(
        a: "ReservoirBuffer", b: "ReservoirBuffer", rng: np.random.Generator
    ) -> "ReservoirBuffer":
        """Combine two buffers into one that is uniform over both streams.

        Each retained slot comes from ``a`` with probability
        ``T_a / (T_a + T_b)`` and from ``b`` otherwise, drawing without
        replacement within each source. When both fit together, every entry
        is kept.

        :param a: first buffer, left unchanged
        :param b: second buffer, left unchanged
        :param rng: source of the draws
        :return: a new buffer with ``total_seen = T_a + T_b``
        :raises: :exc:`CapacityMismatchError <flowdyn.exceptions.CapacityMismatchError>`: if the capacities differ.
        """
        if a.capacity != b.capacity:
            raise CapacityMismatchError(
                "Cannot merge buffers of capacity {} and {}.".format(
                    a.capacity, b.capacity
                )
            )
        merged = ReservoirBuffer(a.capacity)
        merged.total_seen = a.total_seen + b.total_seen
        if len(a.entries) + len(b.entries) <= merged.capacity:
            merged.entries = a.snapshot() + b.snapshot()
            return merged

        from_a = [a.entries[i] for i in rng.permutation(len(a.entries))]
        from_b = [b.entries[i] for i in rng.permutation(len(b.entries))]
        p_a = a.total_seen / merged.total_seen
        while len(merged.entries) < merged.capacity:
            if not from_b or (from_a and rng.random() < p_a):
                merged.entries.append(from_a.pop())
            else:
                merged.entries.append(from_b.pop())
        return merged

    def to_dict(self) -> dict:
        return {
            "capacity": self.capacity,
            "total_seen": self.total_seen,
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReservoirBuffer":
        buf = cls(data["capacity"])
        buf.total_seen = int(data["total_seen"])
        buf.entries = [CylindricalSample.from_dict(e) for e in data["entries"]]
        if len(buf.entries) != min(buf.total_seen, buf.capacity):
            raise ValueError(
                "A buffer that saw {} observations must hold {} entries, got {}.".format(
                    buf.total_seen,
                    min(buf.total_seen, buf.capacity),
                    len(buf.entries),
                )
            )
        return buf

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented  # pragma: no cover
        return (
            self.capacity == other.capacity
            and self.total_seen == other.total_seen
            and self.entries == other.entries
        )

    def __str__(self):
        return "<ReservoirBuffer [capacity={capacity}, total_seen={total_seen}, size={size}]>".format(
            capacity=self.capacity, total_seen=self.total_seen, size=len(self.entries)
        )
