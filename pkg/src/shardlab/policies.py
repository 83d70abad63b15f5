"""Honest allocation policies for the repeated shard-assignment game.

A policy maps the observable history (running per-shard fractions, last
adversarial move) to the next honest allocation vector. Budgets: the honest
side controls a fraction ``gamma`` of total power, the adversary ``beta``,
normally gamma + beta = 1.

Two families are implemented. The reactive family spends the whole budget
every round (``static_uniform``, ``simple_dynamic``, ``deficit_proportional``).
The focused family (``deficit_focused``) deliberately withholds a slice of
the budget to guarantee a per-shard floor on at most ``focus`` shards, which
is what makes it usable when there are far fewer nodes than shards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .allocation import as_allocation, deficit

__all__ = [
    "PolicyParams",
    "provable_target",
    "static_uniform",
    "simple_dynamic",
    "deficit_proportional",
    "deficit_focused",
    "POLICIES",
]

_CONSISTENCY_TOL = 1e-12


def _margin_from_floor(q: float) -> float:
    # q = b/(1-2b)  <=>  b = q/(1+2q)
    return q / (1.0 + 2.0 * q)


def _floor_from_margin(b: float) -> float:
    return b / (1.0 - 2.0 * b)


def provable_target(
    focus: int,
    honest_nodes: int,
    num_shards: int,
    gamma: float,
    floor_budget: float | None = None,
    margin: float | None = None,
    occupancy: float = 0.5,
) -> float:
    """Worst-case per-shard fraction the focused policy can guarantee.

    Arguments mirror the policy knobs: ``focus`` is the number of shards the
    policy concentrates on, ``honest_nodes`` the count of honest nodes doing
    the randomized self-allocation, ``floor_budget`` (q) the withheld power
    slice (equivalently ``margin`` b = q/(1+2q)), and ``occupancy`` (c) the
    fraction of the expected shard population assumed to survive sampling
    noise, 0 < c < 1.

    Raises ValueError when the parameters cannot certify a positive target,
    naming the bound that failed.
    """
    if floor_budget is None and margin is None:
        raise ValueError("need floor_budget (q) or margin (b)")
    if floor_budget is None:
        if not 0.0 < margin < 0.5:
            raise ValueError(f"margin b={margin} out of range (0, 1/2)")
        floor_budget = _floor_from_margin(margin)
    elif margin is not None:
        if abs(floor_budget - _floor_from_margin(margin)) > _CONSISTENCY_TOL:
            raise ValueError(
                f"inconsistent parameters: q={floor_budget} vs b/(1-2b)={_floor_from_margin(margin)}"
            )
    q = float(floor_budget)
    if q <= 0.0:
        raise ValueError(f"floor budget q={q} must be positive")
    if q >= 0.5:
        raise ValueError(f"floor budget q={q} violates q < 1/2 (margin b < 1/4)")
    if not 0.0 < occupancy < 1.0:
        raise ValueError(f"occupancy c={occupancy} out of range (0, 1)")
    if not 1 <= focus <= num_shards:
        raise ValueError(f"focus s={focus} out of range [1, {num_shards}]")
    if honest_nodes < 1:
        raise ValueError("honest_nodes must be >= 1")

    c = occupancy
    slack = 1.0 - c + c * math.log(c)  # positive for all c in (0, 1)
    b = _margin_from_floor(q)
    exponent = -honest_nodes * (b / focus) * slack
    bracket = 1.0 - focus * math.exp(exponent)
    if bracket <= 0.0:
        needed = focus * math.log(focus) / (b * slack) if focus > 1 else 0.0
        raise ValueError(
            "provable target is non-positive: honest_nodes="
            f"{honest_nodes} is below the concentration bound "
            f"s*ln(s)/(b*(1-c+c*ln c)) ~= {needed:.1f} for focus s={focus}"
        )
    h = bracket * (c * focus / (num_shards * (1.0 - 2.0 * q))) * gamma
    if h <= 0.0:
        raise ValueError(f"provable target h={h} is non-positive")
    return h


@dataclass
class PolicyParams:
    """Knobs shared by the honest policies.

    ``target`` is the per-shard fraction the deficit policies chase; a scalar
    or a length-K vector. When omitted, ``deficit_proportional`` chases gamma
    itself and ``deficit_focused`` falls back to the provable target computed
    from (focus, honest_nodes, floor_budget, occupancy).
    """

    gamma: float
    num_shards: int
    beta: float | None = None
    target: float | np.ndarray | None = None
    focus: int | None = None
    floor_budget: float | None = None
    margin: float | None = None
    occupancy: float = 0.5
    honest_nodes: int | None = None
    _target_vec: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma={self.gamma} out of range (0, 1)")
        if self.num_shards < 1:
            raise ValueError("num_shards must be >= 1")
        if self.beta is None:
            self.beta = 1.0 - self.gamma
        if self.beta < 0.0:
            raise ValueError("beta must be >= 0")
        if self.floor_budget is not None and self.margin is not None:
            if abs(self.floor_budget - _floor_from_margin(self.margin)) > _CONSISTENCY_TOL:
                raise ValueError(
                    f"inconsistent q={self.floor_budget} vs b={self.margin}: "
                    f"expected q = b/(1-2b) = {_floor_from_margin(self.margin)}"
                )
        if self.floor_budget is None and self.margin is not None:
            self.floor_budget = _floor_from_margin(self.margin)
        if self.focus is not None and not 1 <= self.focus <= self.num_shards:
            raise ValueError(f"focus s={self.focus} out of range [1, {self.num_shards}]")
        if self.target is not None:
            t = np.asarray(self.target, dtype=np.float64)
            if t.ndim == 0:
                t = np.full(self.num_shards, float(t))
            if t.shape != (self.num_shards,):
                raise ValueError(f"target must be scalar or length {self.num_shards}")
            if np.any(t < 0.0) or np.any(t > 1.0):
                raise ValueError("targets must lie in [0, 1]")
            self._target_vec = t

    def target_vector(self, default: float) -> np.ndarray:
        if self._target_vec is not None:
            return self._target_vec
        return np.full(self.num_shards, default)

    def focused_target_vector(self) -> np.ndarray:
        """Target for deficit_focused: explicit if given, else the provable one."""
        if self._target_vec is not None:
            return self._target_vec
        if self.focus is None or self.honest_nodes is None or self.floor_budget is None:
            raise ValueError(
                "deficit_focused needs an explicit target or (focus, honest_nodes, floor_budget)"
            )
        h = provable_target(
            self.focus,
            self.honest_nodes,
            self.num_shards,
            self.gamma,
            floor_budget=self.floor_budget,
            occupancy=self.occupancy,
        )
        self._target_vec = np.full(self.num_shards, h)
        return self._target_vec


def static_uniform(params: PolicyParams) -> np.ndarray:
    return np.full(params.num_shards, params.gamma / params.num_shards)


def simple_dynamic(prev_adversary, params: PolicyParams) -> np.ndarray:
    """Mirror half the budget onto last round's adversary, half uniformly.

    gamma_i(t) = (gamma / 2 beta) * beta_i(t-1) + gamma / 2K.
    """
    if params.beta is None or params.beta <= 0.0:
        raise ValueError("simple_dynamic needs a positive adversary budget beta")
    prev = as_allocation(prev_adversary, params.num_shards)
    if prev.sum() > params.beta + 1e-9:
        raise ValueError(f"previous adversary spends {prev.sum()} > beta={params.beta}")
    k = params.num_shards
    return (params.gamma / (2.0 * params.beta)) * prev + params.gamma / (2.0 * k)


def deficit_proportional(avg_prev, params: PolicyParams) -> np.ndarray:
    """Allocate the whole budget proportionally to per-shard deficits.

    Deficits are measured against ``target`` (default: gamma). When no shard
    is deficient the policy spends uniformly.
    """
    avg = as_allocation(avg_prev, params.num_shards)
    u = deficit(avg, params.target_vector(params.gamma))
    total = u.sum()
    if total <= 0.0:
        return static_uniform(params)
    return params.gamma * u / total


def deficit_focused(avg_prev, params: PolicyParams) -> np.ndarray:
    """Deficit allocation restricted to the ``focus`` worst shortfalls.

    Construction: rank deficits, keep the s = focus largest (ties to the
    lowest shard index), spread the budget proportionally over those, clamp
    each kept coordinate into [q/s, 1], then shrink the whole vector by
    1/(1 + q/gamma) so the clamp can never overspend. The result sums to at
    most gamma and every nonzero entry is at least (q/s)/(1 + q/gamma).
    """
    if params.focus is None or params.floor_budget is None:
        raise ValueError("deficit_focused needs focus (s) and floor_budget (q)")
    avg = as_allocation(avg_prev, params.num_shards)
    s = params.focus
    q = params.floor_budget
    gamma = params.gamma
    shrink = 1.0 / (1.0 + q / gamma)

    u = deficit(avg, params.focused_target_vector())
    out = np.zeros(params.num_shards)
    if u.sum() <= 0.0:
        # Nothing is behind target: park the floor on the s lowest indices.
        out[:s] = gamma / s * shrink
        return out

    keep = np.argsort(-u, kind="stable")[:s]
    kept = u[keep]
    scaled = gamma * kept / kept.sum()
    out[keep] = np.clip(scaled, q / s, 1.0)
    out *= shrink
    return out


POLICIES = {
    "static_uniform": lambda avg, prev_adv, p: static_uniform(p),
    "simple_dynamic": lambda avg, prev_adv, p: simple_dynamic(prev_adv, p),
    "deficit_proportional": lambda avg, prev_adv, p: deficit_proportional(avg, p),
    "deficit_focused": lambda avg, prev_adv, p: deficit_focused(avg, p),
}
