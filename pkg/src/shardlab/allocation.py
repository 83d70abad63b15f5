"""Vector primitives for the shard allocation game.

All functions operate on 1-D numpy arrays indexed by shard. Entries are
mining-power fractions, so everything lives in [0, 1] and budgets are
enforced by the callers that own them.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "as_allocation",
    "instantaneous_fraction",
    "update_running_average",
    "deficit",
    "distance_to_target",
    "project_to_box",
    "worst_shard_fraction",
]


def as_allocation(values, num_shards: int | None = None) -> np.ndarray:
    """Coerce to a float64 1-D array and validate entries are >= 0."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"allocation must be 1-D, got shape {arr.shape}")
    if num_shards is not None and arr.shape[0] != num_shards:
        raise ValueError(f"expected {num_shards} shards, got {arr.shape[0]}")
    if arr.shape[0] == 0:
        raise ValueError("allocation needs at least one shard")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise ValueError("allocation entries must be finite and >= 0")
    return arr


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def instantaneous_fraction(honest, adversary) -> np.ndarray:
    """Per-shard honest share of total power, with the 0/0 -> 0 convention.

    A shard that neither side touches contributes nothing to the round, so
    its fraction is defined as zero rather than NaN.
    """
    g = as_allocation(honest)
    b = as_allocation(adversary)
    _check_same_shape(g, b)
    total = g + b
    out = np.zeros_like(g)
    np.divide(g, total, out=out, where=total > 0.0)
    return out


def update_running_average(avg_prev, current, t: int) -> np.ndarray:
    """Fold round t's fractions into the running per-shard average.

    t is 1-based; at t = 1 the previous average is ignored entirely.
    """
    if t < 1:
        raise ValueError("round index t must be >= 1")
    avg = np.asarray(avg_prev, dtype=np.float64)
    cur = np.asarray(current, dtype=np.float64)
    _check_same_shape(avg, cur)
    return ((t - 1) * avg + cur) / t


def deficit(avg, target) -> np.ndarray:
    """Entrywise shortfall (target - avg)^+; target may be scalar or per-shard."""
    a = np.asarray(avg, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if t.ndim not in (0, 1):
        raise ValueError("target must be a scalar or a per-shard vector")
    if t.ndim == 1:
        _check_same_shape(a, t)
    return np.maximum(t - a, 0.0)


def distance_to_target(avg, target) -> float:
    """Euclidean distance from the running average to the target box.

    The box is {x : x_i >= target_i}, capped above at 1, so the distance is
    just the l2 norm of the deficit vector.
    """
    return float(np.linalg.norm(deficit(avg, target)))


def project_to_box(values, lower: float, upper: float) -> np.ndarray:
    if lower > upper:
        raise ValueError(f"empty box: [{lower}, {upper}]")
    arr = np.asarray(values, dtype=np.float64)
    return np.clip(arr, lower, upper)


def worst_shard_fraction(avg) -> float:
    """The headline metric: the running average of the worst-off shard."""
    a = np.asarray(avg, dtype=np.float64)
    if a.size == 0:
        raise ValueError("empty average vector")
    return float(a.min())
