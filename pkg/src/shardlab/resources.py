"""Resource accounting: bytes spent maintaining the ordered log versus
bytes spent maintaining one shard.

Everything is metered in bytes, including computation (bytes pushed through
the toy executor); the quantities of interest are trends, not absolute
costs. The headline figure is the overhead ratio: ordered-log upkeep
divided by single-shard upkeep, per dimension. A scalable design drives it
toward zero as blocks grow.
"""
from __future__ import annotations

__all__ = ["SMR_CATEGORIES", "DIMENSIONS", "ResourceMeter"]

SMR_CATEGORIES = (
    "shard_pointers",
    "state_commitments",
    "challenge_interactions",
    "availability_votes",
    "fraud_proofs",
    "chunk_traffic",
    "rotation_sync",
)
_ALL_CATEGORIES = SMR_CATEGORIES + ("shard_processing",)
DIMENSIONS = ("computation", "communication", "storage")


class ResourceMeter:
    """Monotone per-category, per-dimension byte counters."""

    def __init__(self):
        self.counters = {(c, d): 0 for c in _ALL_CATEGORIES for d in DIMENSIONS}

    def record(self, category: str, dimension: str, nbytes: int) -> None:
        if category not in _ALL_CATEGORIES:
            raise ValueError(f"unknown category {category!r}")
        if dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension {dimension!r}")
        if nbytes < 0:
            raise ValueError("byte counts cannot decrease")
        if nbytes:
            self.counters[(category, dimension)] += int(nbytes)

    def record_all_dimensions(self, category: str, nbytes: int) -> None:
        """Log content is received, kept, and processed: meter all three."""
        for dimension in DIMENSIONS:
            self.record(category, dimension, nbytes)

    def total(self, category: str, dimension: str) -> int:
        return self.counters[(category, dimension)]

    def smr_total(self, dimension: str) -> int:
        return sum(self.counters[(c, dimension)] for c in SMR_CATEGORIES)

    def overhead_ratio(self) -> dict:
        """Per dimension: SMR-side bytes over own-shard bytes.

        A dimension with no shard-side work has no defined ratio and is
        reported as None; an idle SMR side over real shard work is 0.0.
        """
        ratios = {}
        for dimension in DIMENSIONS:
            shard_side = self.counters[("shard_processing", dimension)]
            ratios[dimension] = (
                self.smr_total(dimension) / shard_side if shard_side else None
            )
        return ratios

    def headline_ratio(self):
        """Max defined per-dimension ratio; None when none is defined."""
        defined = [v for v in self.overhead_ratio().values() if v is not None]
        return max(defined) if defined else None

    def csv_rows(self):
        """Rows matching the export schema: category, dimension, bytes."""
        for category in _ALL_CATEGORIES:
            for dimension in DIMENSIONS:
                yield category, dimension, self.counters[(category, dimension)]

    def merge(self, other: "ResourceMeter") -> None:
        for key, value in other.counters.items():
            self.counters[key] += value
