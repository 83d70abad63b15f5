"""Named verification suites behind ``shardlab verify <suite>``.

Every check measures one quantity, compares it against its bound, and is
reported as a single line: name, measured value, bound, margin, PASS or
FAIL. Suites group the checks per claim family; ``run_suite("all")`` runs
everything once (the bisection checks run inside the protocol suite).

Known failing check: cascade/fraction-reading. The cascade adversary keeps
the worst shard's allocation under 2(1-beta)ln(K)/K, but the honest policy
concentrates on attacked shards, so the worst instantaneous *fraction*
min_i r_i(t) sits well above that bound in every period. Both readings are
reported; the fraction reading fails by construction and is kept so the gap
stays visible.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .adversaries import (
    cascade_period,
    escalation_integer_period_bound,
    escalation_ladder,
    escalation_period_bound,
    myopic_optimal,
    suppression_objective,
)
from .game import GameConfig, run, sweep_random_adversaries
from .protocol.availability import (
    availability_soundness_oracle,
    num_adversarial,
    required_data_chunks,
)
from .protocol.bisection import PrefixExecutor, run_bisection
from .protocol.coding import decode_stripe, encode_stripe
from .protocol.state import Payment, ToyState, derive_shard_ledger
from .protocol.log import OrderedLog
from .protocol.world import Scenario, run_world
from .resources import SMR_CATEGORIES

__all__ = ["Check", "SUITES", "run_suite", "suite_names"]


@dataclass
class Check:
    name: str
    measured: float
    bound: float
    op: str  # "<=", ">=", "~=" (absolute deviation)
    margin: float  # >= 0 iff passed
    passed: bool
    note: str = ""


def _le(name, measured, bound, tol=0.0, note="") -> Check:
    margin = (bound + tol) - measured
    return Check(name, float(measured), float(bound), "<=", float(margin), margin >= 0.0, note)


def _ge(name, measured, bound, tol=0.0, note="") -> Check:
    margin = measured - (bound - tol)
    return Check(name, float(measured), float(bound), ">=", float(margin), margin >= 0.0, note)


def _eq(name, measured, expected, tol, note="") -> Check:
    margin = tol - abs(measured - expected)
    return Check(name, float(measured), float(expected), "~=", float(margin), margin >= 0.0, note)


# --- worst-shard throttling under a static policy ----------------------------


def suite_throttle() -> list[Check]:
    cfg = GameConfig(
        num_shards=100, rounds=256, gamma=0.5, beta=0.5, mode="mean_field",
        policy="static_uniform", adversary="concentrate", seed=0,
    )
    psi = run(cfg).psi_final
    # uniform gamma/K against a full-budget point mass: (gamma/K)/(gamma/K+beta)
    expected = 0.005 / 0.505
    return [_eq("throttle/static-uniform-psi", psi, expected, 1e-12)]


# --- simple-dynamic sandwich against the escalation schedule ------------------


def suite_escalation() -> list[Check]:
    checks = []
    for k in (16, 64, 256, 1024):
        r = math.log(k)
        _, _, tau = escalation_ladder(0.5, k, r)
        period = tau + 1
        rounds = 400 * period
        cfg = GameConfig(
            num_shards=k, rounds=rounds, mode="mean_field",
            policy="simple_dynamic", adversary="escalation", seed=0,
        )
        trace = run(cfg, record_full=True)
        lower = 0.14 / math.log2(3 * k)
        checks.append(_ge(f"escalation/K={k}/psi-lower", trace.psi_final, lower))

        start = (rounds // period - 1) * period
        period_avg = float(trace.fractions[start:start + period, 0].mean())
        int_bound = escalation_integer_period_bound(tau, r)
        checks.append(
            _ge(f"escalation/K={k}/period-average", period_avg, int_bound, tol=1e-9,
                note="integer-ladder cap on the target shard")
        )

        tau_exact = math.log(k + 1) / math.log(r)
        stepped = escalation_integer_period_bound(tau_exact, r)
        closed = escalation_period_bound(k, r)
        checks.append(
            _eq(f"escalation/K={k}/closed-form-identity", stepped, closed, 1e-9)
        )
    return checks


# --- approachability guarantee of the deficit-proportional policy -------------

_THEOREM_KS = (2, 10, 100)
_NAMED_ADVERSARIES = ("replicate", "concentrate", "myopic", "escalation", "cascade", "random")


def _theorem_run_set(k: int, rounds: int):
    """Yield (adversary, config) pairs valid at this shard count."""
    for adv in _NAMED_ADVERSARIES:
        if adv == "cascade" and k <= math.e ** 2:
            continue  # the shrinking-wave schedule is undefined for tiny K
        growth = 2.0 if adv == "escalation" and k == 2 else None
        yield adv, GameConfig(
            num_shards=k, rounds=rounds, mode="mean_field",
            policy="deficit_proportional", adversary=adv, seed=1, growth=growth,
        )


def suite_approachability() -> list[Check]:
    rounds = 10_000
    checks = []
    for k in _THEOREM_KS:
        ts = np.arange(1, rounds + 1)
        bound = 0.5 * np.sqrt(k / ts)
        psi_floor = 0.5 * (1.0 - math.sqrt(k / rounds))

        excess, worst_psi, names = -math.inf, math.inf, []
        for adv, cfg in _theorem_run_set(k, rounds):
            trace = run(cfg)
            excess = max(excess, float((trace.distance - bound).max()))
            worst_psi = min(worst_psi, trace.psi_final)
            names.append(adv)
        checks.append(
            _le(f"approachability/K={k}/distance-excess", excess, 0.0, tol=1e-12,
                note="adversaries: " + ",".join(names))
        )
        checks.append(_ge(f"approachability/K={k}/psi-floor", worst_psi, psi_floor, tol=1e-12))

        sweep_cfg = GameConfig(
            num_shards=k, rounds=rounds, mode="mean_field",
            policy="deficit_proportional", adversary="random", seed=2,
        )
        out = sweep_random_adversaries(sweep_cfg, 50, seed=99)
        sweep_excess = float((out["distance"] - bound[None, :]).max())
        sweep_psi = float(out["psi"][:, -1].min())
        checks.append(
            _le(f"approachability/K={k}/distance-excess-random50", sweep_excess, 0.0, tol=1e-12)
        )
        checks.append(
            _ge(f"approachability/K={k}/psi-floor-random50", sweep_psi, psi_floor, tol=1e-12)
        )
    return checks


# --- information-theoretic ceilings -------------------------------------------


def suite_ceilings() -> list[Check]:
    # The gamma ceiling binds against the policy's worst-case adversary:
    # replicate mirrors the honest allocation, pinning every fraction at
    # exactly gamma. Wasteful schedules (rest rounds, concentration) leave
    # untouched shards at fraction 1 and can push psi above gamma without
    # contradicting the bound.
    checks = []
    for policy in ("static_uniform", "simple_dynamic", "deficit_proportional"):
        worst_guarantee = math.inf
        for k in (10, 100):
            for adv, base in _theorem_run_set(k, 2000):
                cfg = replace(base, policy=policy)
                psi = run(cfg).psi_final
                if adv == "replicate":
                    checks.append(
                        _eq(f"ceilings/replicate-pins-gamma/{policy}/K={k}", psi, 0.5, 1e-12)
                    )
                worst_guarantee = min(worst_guarantee, psi)
        checks.append(
            _le(f"ceilings/worst-case-psi/{policy}", worst_guarantee, 0.5, tol=1e-12,
                note="min over adversaries and K of the achieved psi")
        )

    ceiling = 0.5 * 10 / 100 + 0.02
    for policy, extra in (
        ("deficit_proportional", {}),
        ("deficit_focused", {"targets": 0.05, "focus": 100, "floor_budget": 0.1}),
    ):
        worst = -math.inf
        for seed in range(20):
            cfg = GameConfig(
                num_shards=100, rounds=5000, mode="stochastic", num_nodes=10,
                policy=policy, adversary="cascade", seed=seed, **extra,
            )
            worst = max(worst, run(cfg).psi_final)
        checks.append(
            _le(f"ceilings/stochastic-psi-max/{policy}", worst, ceiling,
                note="K=100, N=10, 20 seeds")
        )
    return checks


# --- strategy-space inequalities ----------------------------------------------


def _grid_minimum(u: np.ndarray, g: np.ndarray, beta: float, step: float = 1e-4) -> np.ndarray:
    """Greedy unit-allocation oracle; exactly optimal on the step grid.

    The step count is floored so the oracle never overspends the budget;
    an infeasible oracle could undercut the true minimum.
    """
    b = np.zeros_like(g)
    num = u * g
    for _ in range(int(beta / step)):
        denom = g + b
        cur = np.divide(num, denom, out=np.zeros_like(num), where=denom > 0.0)
        gain = cur - num / (denom + step)
        b[int(gain.argmax())] += step
    return b


def _random_instance(rng) -> tuple[int, float, float, np.ndarray]:
    k = int(rng.integers(2, 7))
    gamma = float(rng.uniform(0.1, 0.9))
    rbar = rng.random(k)
    u = np.maximum(gamma - rbar, 0.0)
    if u.sum() <= 0.0:
        u[int(rng.integers(0, k))] = 0.5 * gamma
    return k, gamma, 1.0 - gamma, u


def suite_ssi(instances: int = 200) -> list[Check]:
    rng = np.random.default_rng(20260814)
    worst_plain = math.inf
    worst_grid_gap = -math.inf
    for _ in range(instances):
        k, gamma, beta, u = _random_instance(rng)
        g = gamma * u / u.sum()
        b = myopic_optimal(u, g, beta)
        obj = suppression_objective(u, g, b)
        worst_plain = min(worst_plain, obj - gamma * u.sum())
        grid_obj = suppression_objective(u, g, _grid_minimum(u, g, beta))
        worst_grid_gap = max(worst_grid_gap, obj - grid_obj)

    worst_mod = math.inf
    for _ in range(instances):
        k, gamma, beta, u = _random_instance(rng)
        s = int(rng.integers(1, k + 1))
        q = float(rng.uniform(0.05, 0.3))
        margin_b = q / (1.0 + 2.0 * q)
        keep = np.argsort(-u, kind="stable")[:s]
        g = np.zeros(k)
        g[keep] = np.clip(gamma * u[keep] / u[keep].sum(), q / s, 1.0)
        obj = suppression_objective(u, g, myopic_optimal(u, g, beta))
        bound = (s / k) * gamma * (1.0 - 2.0 * margin_b) * u.sum()
        worst_mod = min(worst_mod, obj - bound)

    return [
        _ge("ssi/plain-worst-gap", worst_plain, 0.0, tol=1e-9,
            note=f"min over {instances} instances of min_b obj - gamma*sum(u)"),
        _le("ssi/myopic-vs-grid", worst_grid_gap, 0.0, tol=1e-6,
            note="closed-form minimum never above the 1e-4-step grid oracle"),
        _ge("ssi/modified-worst-gap", worst_mod, 0.0, tol=1e-6,
            note="focused allocation vs (s/K)*gamma*(1-2b)*sum(u)"),
    ]


# --- stochastic worst-shard throughput -----------------------------------------


def suite_stochastic() -> list[Check]:
    from .experiments import GAME_PRESETS

    large = GAME_PRESETS["homogeneous-large"]()
    focused = dict(large.runs)["deficit_focused"]
    psi = np.array([
        run(replace(focused, seed=s)).psi_final for s in range(20)
    ])
    checks = [
        _ge("stochastic/large-mean-psi", float(psi.mean()), 0.40,
            note="K=100, N=1000, cascade, 20 seeds"),
        _ge("stochastic/large-min-psi", float(psi.min()), 0.35),
    ]

    small = GAME_PRESETS["homogeneous-small"]().runs[0][1]
    psi_small = np.array([
        run(replace(small, seed=s)).psi_final for s in range(20)
    ])
    checks.append(
        _ge("stochastic/small-mean-psi", float(psi_small.mean()), 0.035,
            note="K=100, N=10, target 0.05, 20 seeds")
    )
    return checks


# --- cascade adversary potency --------------------------------------------------


def suite_cascade() -> list[Check]:
    k = 256
    period = cascade_period(k)
    warmup, measured_periods = 1, 10
    rounds = (warmup + measured_periods) * period
    cfg = GameConfig(
        num_shards=k, rounds=rounds, mode="mean_field",
        policy="deficit_proportional", adversary="cascade", seed=0,
    )
    trace = run(cfg, record_full=True)
    lo = warmup * period
    worst_fraction = float(trace.fractions[lo:].min(axis=1).max())
    worst_allocation = float(trace.honest[lo:].min(axis=1).max())
    bound = 2.0 * 0.5 * math.log(k) / k
    return [
        _le("cascade/fraction-reading", worst_fraction, bound,
            note=f"max over {measured_periods} periods of min_i r_i(t); "
                 "fails: the policy reinforces attacked shards"),
        _le("cascade/allocation-reading", worst_allocation, bound,
            note="same rounds, min_i over honest allocation gamma_i(t)"),
    ]


# --- protocol machinery ----------------------------------------------------------


def _coding_round_trip_failures() -> int:
    rng = np.random.default_rng(5)
    failures = 0
    for n in range(1, 11):
        for p in range(1, n + 1):
            data = [int(v) for v in rng.integers(0, 65537, size=p)]
            chunks = encode_stripe(data, n)
            for subset in combinations(range(n), p):
                got = decode_stripe({x: chunks[x] for x in subset}, p)
                if got != data:
                    failures += 1
    return failures


def _availability_violations() -> int:
    violations = 0
    for n in range(1, 13):
        for beta_pct in range(0, 50, 5):
            beta = beta_pct / 100.0
            p = required_data_chunks(beta, n)
            honest = n - num_adversarial(beta, n)
            for holders in range(0, honest + 1):
                if availability_soundness_oracle(holders, beta, n, p):
                    violations += 1
    return violations


def _random_payment_stream(rng, count: int):
    accounts = [f"a{i}" for i in range(6)]
    genesis = ToyState({a: int(rng.integers(5, 60)) for a in accounts})
    payments = tuple(
        Payment(
            accounts[int(rng.integers(0, 6))],
            accounts[int(rng.integers(0, 6))],
            int(rng.integers(1, 9)),
        )
        for _ in range(count)
    )
    return genesis, payments


def suite_bisection(instances: int = 200) -> list[Check]:
    rng = np.random.default_rng(90210)
    index_misses = 0
    round_misses = 0
    for _ in range(instances):
        branching = int(rng.choice([2, 10]))
        num_txs = int(rng.integers(1, 4097))
        fault = int(rng.integers(0, num_txs))
        genesis, payments = _random_payment_stream(rng, num_txs)
        leader = PrefixExecutor(genesis, payments, fault_index=fault)
        challenger = PrefixExecutor(genesis, payments)
        result = run_bisection(leader, challenger, branching)
        if result.index != fault:
            index_misses += 1
        expected_rounds = 0
        while branching ** expected_rounds < num_txs:
            expected_rounds += 1
        if result.rounds != expected_rounds:
            round_misses += 1
    return [
        _le("bisection/index-misses", index_misses, 0,
            note=f"{instances} random injections, B <= 4096, S in (2, 10)"),
        _le("bisection/round-count-misses", round_misses, 0,
            note="rounds must equal ceil(log_S B) exactly"),
    ]


def _replay_scenario() -> Scenario:
    return Scenario(
        num_nodes=20, num_shards=4, beta=0.25, smr_blocks=8, epoch_length=4,
        branching=3, txs_per_block=6, seed=7, rotation_period=2,
        miscode=((1, 1),), withhold=((2, 0),), bad_commitment=((0, 3),),
    )


def suite_protocol() -> list[Check]:
    checks = [
        _le("protocol/coding-round-trip-failures", _coding_round_trip_failures(), 0,
            note="exhaustive p-subsets, n <= 10"),
        _le("protocol/availability-violations", _availability_violations(), 0,
            note="all holder counts, N <= 12, beta grid"),
    ]
    checks.extend(suite_bisection())

    scenario = _replay_scenario()
    first = run_world(scenario)
    second = run_world(scenario)
    dump = first.log.dump()
    replay_diffs = int(dump != second.log.dump())
    reparse_diffs = int(OrderedLog.parse(dump).dump() != dump)
    ledger_diffs = sum(
        int(first.ledger(s) != second.ledger(s)) for s in range(scenario.num_shards)
    )
    checks.append(
        _le("protocol/replay-dump-diffs", replay_diffs + reparse_diffs, 0,
            note="two runs and a parse round-trip, bit-exact")
    )
    checks.append(_le("protocol/replay-ledger-diffs", ledger_diffs, 0))
    return checks


# --- resource accounting trends ---------------------------------------------------


def suite_resources() -> list[Check]:
    ratios = []
    for txs in (6, 12, 24, 48, 96):
        scenario = Scenario(
            num_nodes=200, num_shards=20, beta=0.25, smr_blocks=8,
            epoch_length=4, txs_per_block=txs, seed=0,
        )
        ratios.append(run_world(scenario).meter.headline_ratio())
    worst_step = max(b - a for a, b in zip(ratios, ratios[1:]))
    checks = [
        Check(
            "resources/ratio-strictly-decreasing", worst_step, 0.0, "<",
            -worst_step, worst_step < 0.0,
            note="headline ratios " + ", ".join(f"{r:.1f}" for r in ratios),
        )
    ]

    ks = (10, 20, 40, 80, 120, 160)
    per_block = []
    for k in ks:
        scenario = Scenario(
            num_nodes=200, num_shards=k, beta=0.25, smr_blocks=6,
            epoch_length=3, txs_per_block=4, seed=1,
        )
        meter = run_world(scenario).meter
        total = sum(meter.total(c, "storage") for c in SMR_CATEGORIES)
        per_block.append(total / scenario.smr_blocks)
    x = np.array(ks, dtype=np.float64)
    y = np.array(per_block)
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    pred = design @ coef
    r2 = 1.0 - ((y - pred) ** 2).sum() / ((y - y.mean()) ** 2).sum()
    checks.append(
        _ge("resources/log-bytes-linear-in-K", float(r2), 0.99,
            note=f"R^2 of bytes/SMR-block over K={ks}")
    )
    return checks


SUITES = {
    "throttle": suite_throttle,
    "escalation": suite_escalation,
    "approachability": suite_approachability,
    "ceilings": suite_ceilings,
    "ssi": suite_ssi,
    "stochastic": suite_stochastic,
    "cascade": suite_cascade,
    "protocol": suite_protocol,
    "bisection": suite_bisection,
    "resources": suite_resources,
}

# bisection runs inside protocol; listing it twice would double the work
_ALL_ORDER = (
    "throttle", "escalation", "approachability", "ceilings", "ssi",
    "stochastic", "cascade", "protocol", "resources",
)


def suite_names() -> list[str]:
    return list(SUITES) + ["all"]


def _print_check(check: Check, stream) -> None:
    status = "PASS" if check.passed else "FAIL"
    line = (
        f"[{status}] {check.name}: measured={check.measured:.10g} "
        f"{check.op} bound={check.bound:.10g} margin={check.margin:.3g}"
    )
    if check.note:
        line += f"  ({check.note})"
    print(line, file=stream)


def run_suite(name: str, stream=None) -> bool:
    """Run one suite (or "all"); print per-check lines; True iff all passed."""
    stream = stream or sys.stdout
    if name == "all":
        names = _ALL_ORDER
    elif name in SUITES:
        names = (name,)
    else:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}")

    ok = True
    total = failed = 0
    for suite in names:
        print(f"suite {suite}", file=stream)
        for check in SUITES[suite]():
            _print_check(check, stream)
            total += 1
            if not check.passed:
                failed += 1
                ok = False
    print(f"{total - failed}/{total} checks passed", file=stream)
    return ok
