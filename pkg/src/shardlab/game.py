"""Round-based engine for the honest-vs-adversary shard allocation game.

Each round: the honest policy publishes an allocation (refreshed every
``rotation_interval`` rounds and held in between), the adversary responds
after seeing it, per-shard fractions are computed with the 0/0 -> 0 rule,
and the running averages, worst-shard metric and distance-to-target are
updated. In stochastic mode the honest vector is realized by ``n`` nodes
sampling shards from the published distribution, and the adversary reacts
to the realized counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .adversaries import ADVERSARIES, AdversaryParams, AdversaryState
from .policies import POLICIES, PolicyParams

__all__ = ["GameConfig", "GameTrace", "BatchResult", "run", "run_batch", "sweep_random_adversaries"]

_BUDGET_TOL = 1e-12


@dataclass
class GameConfig:
    num_shards: int
    rounds: int
    gamma: float = 0.5
    beta: float = 0.5
    mode: str = "mean_field"  # "mean_field" | "stochastic"
    policy: str = "deficit_proportional"
    adversary: str = "replicate"
    num_nodes: int | None = None
    rotation_interval: int = 1
    compliance: float = 1.0
    seed: int | None = None
    targets: object = None  # scalar or per-shard vector for the deficit policies
    focus: int | None = None
    floor_budget: float | None = None
    margin: float | None = None
    occupancy: float = 0.5
    growth: float | None = None  # escalation ladder ratio
    target_shard: int = 0

    def __post_init__(self) -> None:
        if self.num_shards < 1:
            raise ValueError("num_shards must be >= 1")
        if self.rounds < 0:
            raise ValueError("rounds must be >= 0")
        if abs(self.gamma + self.beta - 1.0) > _BUDGET_TOL:
            raise ValueError(f"budgets must satisfy gamma + beta = 1, got {self.gamma + self.beta}")
        if self.mode not in ("mean_field", "stochastic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.adversary not in ADVERSARIES:
            raise ValueError(f"unknown adversary {self.adversary!r}")
        if self.mode == "stochastic":
            if self.num_nodes is None or self.num_nodes < 1:
                raise ValueError("stochastic mode needs num_nodes >= 1")
            if int(math.floor(self.num_nodes * self.gamma)) < 1:
                raise ValueError("stochastic mode needs at least one honest node")
        if self.rotation_interval < 1:
            raise ValueError("rotation_interval must be >= 1")
        if not 0.0 < self.compliance <= 1.0:
            raise ValueError("compliance must be in (0, 1]")

    def policy_params(self) -> PolicyParams:
        n = None
        if self.num_nodes is not None:
            n = int(math.floor(self.num_nodes * self.gamma))
        return PolicyParams(
            gamma=self.gamma,
            num_shards=self.num_shards,
            beta=self.beta,
            target=self.targets,
            focus=self.focus,
            floor_budget=self.floor_budget,
            margin=self.margin,
            occupancy=self.occupancy,
            honest_nodes=n,
        )

    def adversary_params(self) -> AdversaryParams:
        return AdversaryParams(
            beta=self.beta,
            num_shards=self.num_shards,
            gamma=self.gamma,
            growth=self.growth,
            target_shard=self.target_shard,
        )


@dataclass
class GameTrace:
    num_shards: int
    rounds: int
    mode: str
    targets: np.ndarray
    psi: np.ndarray  # psi(t) = min_i average_i(t), one entry per round
    distance: np.ndarray  # d_t = l2 distance of the running average to the target box
    final_average: np.ndarray
    honest: np.ndarray | None = None  # (T, K) when recorded in full
    adversary: np.ndarray | None = None
    fractions: np.ndarray | None = None
    averages: np.ndarray | None = None

    @property
    def psi_final(self) -> float | None:
        return float(self.psi[-1]) if self.rounds > 0 else None

    @property
    def distance_final(self) -> float | None:
        return float(self.distance[-1]) if self.rounds > 0 else None


def _report_targets(config: GameConfig, pparams: PolicyParams) -> np.ndarray:
    if config.policy == "deficit_focused":
        return pparams.focused_target_vector()
    return pparams.target_vector(config.gamma)


def run(config: GameConfig, record_full: bool = False) -> GameTrace:
    """Play the configured game and return its trace.

    Bit-exact reproducible for a fixed (config, seed) pair: all randomness
    flows through one numpy Generator.
    """
    k, t_max = config.num_shards, config.rounds
    pparams = config.policy_params()
    aparams = config.adversary_params()
    targets = _report_targets(config, pparams)
    policy_fn = POLICIES[config.policy]
    adversary_fn = ADVERSARIES[config.adversary]

    rng = np.random.default_rng(config.seed)
    astate = AdversaryState(name=config.adversary, target_shard=config.target_shard, rng=rng)

    stochastic = config.mode == "stochastic"
    n_honest = int(math.floor(config.num_nodes * config.gamma)) if stochastic else 0
    uniform = np.full(k, config.gamma / k)

    avg = np.zeros(k)
    prev_adv = np.zeros(k)
    honest = np.zeros(k)
    psi = np.empty(t_max)
    dist = np.empty(t_max)
    full = None
    if record_full:
        full = {name: np.empty((t_max, k)) for name in ("honest", "adversary", "fractions", "averages")}

    r_buf = np.zeros(k)
    for t in range(1, t_max + 1):
        if (t - 1) % config.rotation_interval == 0:
            raw = policy_fn(avg, prev_adv, pparams)
            total = raw.sum()
            eff = raw * (config.gamma / total) if total > 0.0 else uniform
            if config.compliance < 1.0:
                eff = config.compliance * eff + (1.0 - config.compliance) * uniform
            if stochastic:
                counts = rng.multinomial(n_honest, eff / eff.sum())
                honest = counts / config.num_nodes
            else:
                honest = eff
        deficits = np.maximum(targets - avg, 0.0)
        adv = adversary_fn(honest, avg, deficits, astate, aparams)
        total_power = honest + adv
        r_buf.fill(0.0)
        np.divide(honest, total_power, out=r_buf, where=total_power > 0.0)
        avg = ((t - 1) * avg + r_buf) / t
        shortfall = np.maximum(targets - avg, 0.0)
        dist[t - 1] = math.sqrt(float(np.dot(shortfall, shortfall)))
        psi[t - 1] = avg.min()
        prev_adv = adv
        if full is not None:
            full["honest"][t - 1] = honest
            full["adversary"][t - 1] = adv
            full["fractions"][t - 1] = r_buf
            full["averages"][t - 1] = avg

    trace = GameTrace(
        num_shards=k,
        rounds=t_max,
        mode=config.mode,
        targets=targets,
        psi=psi,
        distance=dist,
        final_average=avg,
    )
    if full is not None:
        trace.honest = full["honest"]
        trace.adversary = full["adversary"]
        trace.fractions = full["fractions"]
        trace.averages = full["averages"]
    return trace


@dataclass
class BatchResult:
    seeds: list[int]
    psi_final: np.ndarray
    distance_final: np.ndarray
    traces: list[GameTrace] = field(default_factory=list)

    def summary(self) -> dict:
        q = np.quantile(self.distance_final, [0.0, 0.25, 0.5, 0.75, 1.0])
        return {
            "runs": len(self.seeds),
            "psi_mean": float(self.psi_final.mean()),
            "psi_min": float(self.psi_final.min()),
            "psi_max": float(self.psi_final.max()),
            "distance_quantiles": [float(x) for x in q],
        }


def run_batch(config: GameConfig, seeds, keep_traces: bool = False) -> BatchResult:
    """Run the same game under several seeds and aggregate the endpoints."""
    seeds = [int(s) for s in seeds]
    psi_vals, d_vals, traces = [], [], []
    for s in seeds:
        cfg = GameConfig(**{**config.__dict__, "seed": s})
        tr = run(cfg)
        psi_vals.append(tr.psi_final)
        d_vals.append(tr.distance_final)
        if keep_traces:
            traces.append(tr)
    return BatchResult(
        seeds=seeds,
        psi_final=np.array(psi_vals, dtype=np.float64),
        distance_final=np.array(d_vals, dtype=np.float64),
        traces=traces,
    )


def sweep_random_adversaries(config: GameConfig, count: int, seed: int) -> dict:
    """Run ``count`` independent random-adversary games in one vectorized pass.

    Only mean-field games with the stateless policies are supported; this
    exists so large random sweeps stay cheap. Row g of every returned array
    is a full game, and a single-row sweep is bit-identical to ``run`` with
    ``adversary="random"`` and the same seed (covered by tests).
    """
    if config.mode != "mean_field":
        raise ValueError("sweep supports mean-field games only")
    if config.policy not in ("static_uniform", "deficit_proportional", "simple_dynamic"):
        raise ValueError(f"sweep does not support policy {config.policy!r}")
    if config.rotation_interval != 1 or config.compliance != 1.0:
        raise ValueError("sweep supports rotation_interval=1, compliance=1 only")
    k, t_max, g_n = config.num_shards, config.rounds, count
    gamma, beta = config.gamma, config.beta
    pparams = config.policy_params()
    targets = _report_targets(config, pparams)

    rng = np.random.default_rng(seed)
    avg = np.zeros((g_n, k))
    prev_adv = np.zeros((g_n, k))
    uniform = np.full((g_n, k), gamma / k)
    psi = np.empty((g_n, t_max))
    dist = np.empty((g_n, t_max))
    keep = max(1, k // 4)
    rows = np.arange(g_n)[:, None]

    for t in range(1, t_max + 1):
        if config.policy == "deficit_proportional":
            u = np.maximum(targets - avg, 0.0)
            s = u.sum(axis=1, keepdims=True)
            with np.errstate(invalid="ignore", divide="ignore"):
                honest = np.where(s > 0.0, gamma * u / s, uniform)
        elif config.policy == "simple_dynamic":
            honest = (gamma / (2.0 * beta)) * prev_adv + gamma / (2.0 * k)
        else:
            honest = uniform.copy()
        # mirror the engine's unconditional budget normalization bit for bit
        honest = honest * (gamma / honest.sum(axis=1, keepdims=True))

        draw = rng.random((g_n, k + 1))
        weights, modes = draw[:, :k], draw[:, k]
        adv = np.empty((g_n, k))
        dense = beta * weights / weights.sum(axis=1, keepdims=True)
        adv[:] = dense
        sparse_rows = (modes >= 0.3) & (modes < 0.6)
        if sparse_rows.any():
            idx = np.argsort(-weights[sparse_rows], axis=1, kind="stable")[:, :keep]
            vals = np.take_along_axis(weights[sparse_rows], idx, axis=1)
            sub = np.zeros((idx.shape[0], k))
            np.put_along_axis(sub, idx, beta * vals / vals.sum(axis=1, keepdims=True), axis=1)
            adv[sparse_rows] = sub
        conc_rows = modes < 0.3
        if conc_rows.any():
            cols = np.minimum((modes[conc_rows] / 0.3 * k).astype(int), k - 1)
            sub = np.zeros((cols.shape[0], k))
            sub[np.arange(cols.shape[0]), cols] = beta
            adv[conc_rows] = sub

        total = honest + adv
        r = np.zeros((g_n, k))
        np.divide(honest, total, out=r, where=total > 0.0)
        avg = ((t - 1) * avg + r) / t
        shortfall = np.maximum(targets - avg, 0.0)
        dist[:, t - 1] = np.sqrt(np.einsum("ij,ij->i", shortfall, shortfall))
        psi[:, t - 1] = avg.min(axis=1)
        prev_adv = adv
    return {"psi": psi, "distance": dist, "final_average": avg}
