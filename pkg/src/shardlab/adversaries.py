"""Adversarial allocation strategies.

Every strategy spends the full adversarial budget ``beta`` each round and
moves after seeing the honest vector for the round (Stackelberg order). The
stateful ones (escalation, cascade, random) carry their counters in an
:class:`AdversaryState` owned by the caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .allocation import as_allocation, instantaneous_fraction

__all__ = [
    "AdversaryParams",
    "AdversaryState",
    "replicate",
    "concentrate",
    "suppression_objective",
    "myopic_optimal",
    "escalation_ladder",
    "escalation_step",
    "escalation_period_bound",
    "escalation_integer_period_bound",
    "cascade_wave_size",
    "cascade_period",
    "cascade_step",
    "random_step",
    "ADVERSARIES",
]

_BUDGET_TOL = 1e-12


@dataclass
class AdversaryParams:
    beta: float
    num_shards: int
    gamma: float = 0.5
    growth: float | None = None  # escalation ladder ratio r; default ln K
    target_shard: int = 0

    def __post_init__(self) -> None:
        if self.beta < 0.0:
            raise ValueError("beta must be >= 0")
        if self.num_shards < 1:
            raise ValueError("num_shards must be >= 1")
        if not 0 <= self.target_shard < self.num_shards:
            raise ValueError("target_shard out of range")
        if self.growth is None:
            self.growth = math.log(self.num_shards) if self.num_shards > 1 else 2.0


@dataclass
class AdversaryState:
    name: str
    round_in_period: int = 0
    target_shard: int = 0
    rng: np.random.Generator | None = None


def replicate(honest, beta: float) -> np.ndarray:
    """Copy the honest distribution, pinning every supported shard's fraction.

    With the honest side spending gamma, each supported shard ends up at
    exactly gamma/(gamma+beta). An all-zero honest vector falls back to
    uniform.
    """
    g = as_allocation(honest)
    total = g.sum()
    if total <= 0.0:
        return np.full(g.shape[0], beta / g.shape[0])
    return beta * g / total


def concentrate(target_shard: int, beta: float, num_shards: int) -> np.ndarray:
    if not 0 <= target_shard < num_shards:
        raise ValueError("target_shard out of range")
    out = np.zeros(num_shards)
    out[target_shard] = beta
    return out


def suppression_objective(deficits, honest, adversary) -> float:
    """Deficit-weighted honest throughput the adversary is trying to minimize."""
    u = np.asarray(deficits, dtype=np.float64)
    return float(np.dot(u, instantaneous_fraction(honest, adversary)))


def myopic_optimal(deficits, honest, beta: float) -> np.ndarray:
    """Exact one-round best response minimizing sum u_i * g_i/(g_i + b_i).

    Water-filling form: b_i = (sqrt(u_i g_i)/sqrt(lambda) - g_i)^+ with the
    level found by bisection until the budget matches to 1e-12. Shards with
    u_i * g_i = 0 never receive budget (they contribute nothing to the
    objective). If no shard has u_i * g_i > 0 the split is uniform.
    """
    u = np.asarray(deficits, dtype=np.float64)
    g = as_allocation(honest)
    if u.shape != g.shape:
        raise ValueError("deficits and honest vectors must align")
    if np.any(u < 0.0):
        raise ValueError("deficits must be >= 0")
    k = g.shape[0]
    if beta <= 0.0:
        return np.zeros(k)
    w = np.sqrt(u * g)
    w_total = w.sum()
    if w_total <= 0.0:
        return np.full(k, beta / k)

    def spend(nu: float) -> np.ndarray:
        return np.maximum(w * nu - g, 0.0)

    lo, hi = 0.0, (beta + g.sum()) / w_total
    while spend(hi).sum() < beta:  # guard against rounding at the bracket edge
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        total = spend(mid).sum()
        if abs(total - beta) <= _BUDGET_TOL:
            lo = hi = mid
            break
        if total < beta:
            lo = mid
        else:
            hi = mid
    return spend(0.5 * (lo + hi))


# --- escalation: sawtooth attack tuned against simple_dynamic ---------------


def escalation_ladder(gamma: float, num_shards: int, growth: float) -> tuple[float, float, int]:
    """Ladder parameters (ell, ceiling, tau) for the escalation schedule.

    ell is the mirrored-policy baseline gamma/2K, the ceiling is the largest
    value the policy can be driven to (gamma/2 + gamma/2K), and tau is the
    number of growth steps that fit between them: floor(log_growth(K+1)).
    """
    if growth <= 1.0:
        raise ValueError("growth ratio must exceed 1")
    ell = gamma / (2.0 * num_shards)
    ceiling = gamma / 2.0 + ell
    tau = int(math.floor(math.log(ceiling / ell) / math.log(growth)))
    return ell, ceiling, tau


def escalation_step(state: AdversaryState, params: AdversaryParams) -> np.ndarray:
    """One round of the sawtooth: grow the mirrored allocation, then vanish.

    Emits a_t = (2 beta/gamma) * (ell * r^j - ell) on the target shard,
    clamped to [0, beta]; the remainder is spread uniformly elsewhere. j
    walks 0..tau and wraps.
    """
    k = params.num_shards
    ell, ceiling, tau = escalation_ladder(params.gamma, k, params.growth)
    b_rung = min(ell * params.growth ** state.round_in_period, ceiling)
    a = (2.0 * params.beta / params.gamma) * (b_rung - ell)
    a = min(max(a, 0.0), params.beta)
    out = np.zeros(k)
    out[state.target_shard] = a
    if k > 1:
        out[np.arange(k) != state.target_shard] = (params.beta - a) / (k - 1)
    else:
        out[state.target_shard] = params.beta
    state.round_in_period = (state.round_in_period + 1) % (tau + 1)
    return out


def escalation_period_bound(num_shards: int, growth: float) -> float:
    """Closed-form bound on the target shard's period-averaged throughput.

    1/(1+2r) + (2r/(2r+1)) * ln r / ln((K+1) r), the real-valued-ladder
    expression; the integer-ladder analogue is
    :func:`escalation_integer_period_bound`.
    """
    r = growth
    return 1.0 / (1.0 + 2.0 * r) + (2.0 * r / (2.0 * r + 1.0)) * (
        math.log(r) / math.log((num_shards + 1) * r)
    )


def escalation_integer_period_bound(tau: int, growth: float) -> float:
    """Period-average bound for a ladder of integer length tau: (tau*x + 1)/(tau + 1)."""
    x = 1.0 / (1.0 + 2.0 * growth)
    return (tau * x + 1.0) / (tau + 1.0)


# --- cascade: shrinking-wave attack for large K ------------------------------


def cascade_period(num_shards: int) -> int:
    if num_shards <= math.e ** 2:
        raise ValueError("cascade needs num_shards > e^2")
    ln_k = math.log(num_shards)
    return int(math.ceil(ln_k / math.log(ln_k)))


def cascade_wave_size(num_shards: int, round_in_period: int) -> int:
    """Shards targeted at round t (1-based) of a period: max(1, floor(K / ln(K)^t))."""
    ln_k = math.log(num_shards)
    return max(1, int(math.floor(num_shards / ln_k ** round_in_period)))


def cascade_step(avg_prev, state: AdversaryState, params: AdversaryParams) -> np.ndarray:
    """Spread the budget over a geometrically shrinking set of worst shards."""
    k = params.num_shards
    tau = cascade_period(k)
    avg = as_allocation(avg_prev, k)
    t = state.round_in_period + 1
    m = cascade_wave_size(k, t)
    worst = np.argsort(avg, kind="stable")[:m]  # ties resolve to lowest index
    out = np.zeros(k)
    out[worst] = params.beta / m
    state.round_in_period = (state.round_in_period + 1) % tau
    return out


# --- seeded random adversary --------------------------------------------------


def random_step(state: AdversaryState, params: AdversaryParams) -> np.ndarray:
    """A reproducible random strategy: concentrated, sparse, or dense by turns.

    Draws exactly K+1 uniforms per round so independent runs and stacked
    sweeps consume identical streams.
    """
    if state.rng is None:
        raise ValueError("random adversary needs a seeded rng in its state")
    k = params.num_shards
    draw = state.rng.random(k + 1)
    return _random_from_draw(draw[:k], draw[k], params.beta)


def _random_from_draw(weights: np.ndarray, mode: float, beta: float) -> np.ndarray:
    k = weights.shape[0]
    out = np.zeros(k)
    if mode < 0.3:
        out[min(int(mode / 0.3 * k), k - 1)] = beta
        return out
    if mode < 0.6:
        keep = max(1, k // 4)
        idx = np.argsort(-weights, kind="stable")[:keep]
        w = weights[idx]
        out[idx] = beta * w / w.sum()
        return out
    return beta * weights / weights.sum()


def _deficit_for(avg_prev, target, num_shards: int) -> np.ndarray:
    t = np.asarray(target, dtype=np.float64)
    if t.ndim == 0:
        t = np.full(num_shards, float(t))
    return np.maximum(t - np.asarray(avg_prev, dtype=np.float64), 0.0)


ADVERSARIES = {
    "replicate": lambda honest, avg, defs, st, p: replicate(honest, p.beta),
    "concentrate": lambda honest, avg, defs, st, p: concentrate(p.target_shard, p.beta, p.num_shards),
    "myopic": lambda honest, avg, defs, st, p: myopic_optimal(defs, honest, p.beta),
    "escalation": lambda honest, avg, defs, st, p: escalation_step(st, p),
    "cascade": lambda honest, avg, defs, st, p: cascade_step(avg, st, p),
    "random": lambda honest, avg, defs, st, p: random_step(st, p),
}
