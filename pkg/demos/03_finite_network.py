"""Finite networks: sortition replaces fractions with whole miners.

The mean-field game hands out real-valued power splits. A deployment has
N nodes, each mining one shard per round, chosen by lottery with
probabilities proportional to the policy's allocation. This demo runs the
focused deficit policy in that regime, from plenty of nodes (N = 1000,
comfortably above K) down to starved (N = 10 for K = 100 shards, so most
shards sit idle every round) and with per-shard demand targets that step
down in tiers.

Artifacts go through the experiment layer, the same code path as the
command line front end.
"""
from pathlib import Path

from shardlab.experiments import (
    GAME_PRESETS,
    output_root,
    run_game_experiment,
)
from shardlab.game import run

root = Path(output_root())

# plenty of nodes: the focused policy holds the worst shard near gamma
experiment = GAME_PRESETS["homogeneous-large"]()
label, config = experiment.runs[1]
assert label == "deficit_focused"
trace = run(config)
print(f"N={config.num_nodes}, K={config.num_shards}, T={config.rounds}, one seed")
print(f"  {label}: psi = {trace.psi_final:.4f} against target {config.targets}")

# starved: N/K = 0.1 caps what any policy can promise
small = GAME_PRESETS["homogeneous-small"]()
label, config = small.runs[0]
trace = run(config)
print(f"\nN={config.num_nodes}, K={config.num_shards}: ceiling is gamma*N/K = 0.05")
print(f"  {label}: psi = {trace.psi_final:.4f} against target {config.targets}")

# tiered demand: 20 tiers of 5 shards, targets 1/2 down to 1/21
hetero = GAME_PRESETS["heterogeneous"]()
label, config = hetero.runs[0]
trace = run(config)
print(f"\ntiered targets, N={config.num_nodes}: achieved vs asked, first four tiers")
for tier in range(4):
    lo = tier * 5
    achieved = trace.final_average[lo:lo + 5].mean()
    print(f"  shards {lo:>2}-{lo + 4:<2} target {config.targets[lo]:.3f} achieved {achieved:.3f}")

artifacts = run_game_experiment(hetero, root / "demo-finite-network")
print("\nartifacts:")
for path in artifacts:
    print(f"  {path}")
