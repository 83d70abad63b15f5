"""A focused adversary throttles a statically sharded system.

K = 100 shards, honest and adversarial power split 50/50. The uniform
honest policy grants each shard gamma/K = 0.5% of total power; an adversary
who parks its whole budget on shard 0 owns that shard's block race, and the
honest fraction there settles at (gamma/K)/(gamma/K + beta) = 1/101.
Throughput tracks the worst shard, so one cheap move stalls the chain.

Dynamic policies close the gap: the adversary's commitment is visible one
round later, and reallocating against it restores the worst shard.
"""
from pathlib import Path

from shardlab.experiments import output_root
from shardlab.game import GameConfig, run
from shardlab.plotting import line_chart

K = 100
ROUNDS = 512

print(f"concentrate adversary vs three honest policies, K={K}, {ROUNDS} rounds\n")

series = {}
for policy in ("static_uniform", "simple_dynamic", "deficit_proportional"):
    config = GameConfig(
        num_shards=K,
        rounds=ROUNDS,
        policy=policy,
        adversary="concentrate",
        seed=0,
    )
    trace = run(config, record_full=True)
    series[policy] = (list(range(1, ROUNDS + 1)), trace.psi.tolist())
    print(f"  {policy:<22} worst-shard average psi = {trace.psi_final:.6f}")

floor = (0.5 / K) / (0.5 / K + 0.5)
print(f"\n  static floor (gamma/K)/(gamma/K + beta) = 1/101 = {floor:.6f}")
print("  the static policy sits exactly on it; the dynamic ones do not")

out = Path(output_root()) / "demo-throttling"
out.mkdir(parents=True, exist_ok=True)
chart = out / "psi_vs_t.svg"
line_chart(series, chart, title=f"worst-shard average under concentration, K={K}",
           ylabel="psi")
print(f"\nwrote {chart}")
