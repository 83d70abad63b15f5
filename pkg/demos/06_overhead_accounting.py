"""Where the bytes go: main-chain overhead against shard work.

The pitch for this construction is that the main chain only carries
pointers, votes, commitments, and the occasional dispute, while full
transaction payloads stay on the shards. So the overhead ratio, main-chain
bytes over own-shard bytes in the worst dimension, should fall as blocks
carry more transactions, and total main-chain storage should grow linearly
in the shard count at fixed block volume.

Both trends, measured from the resource meter of full protocol runs.
"""
import numpy as np

from shardlab.protocol import Scenario
from shardlab.protocol.world import run_world

print("overhead ratio vs transactions per block (N=200, K=20):")
previous = None
for txs in (6, 12, 24, 48, 96):
    scenario = Scenario(num_nodes=200, num_shards=20, beta=0.25,
                        smr_blocks=8, epoch_length=4, txs_per_block=txs, seed=0)
    ratio = run_world(scenario).meter.headline_ratio()
    marker = "" if previous is None else ("  (down)" if ratio < previous else "  (UP!)")
    print(f"  B = {txs:>3} txs/block: ratio = {ratio:8.1f}{marker}")
    previous = ratio

print("\nmain-chain storage vs shard count (N=200, fixed block volume):")
ks = np.array([10, 20, 40, 80, 120, 160], dtype=float)
totals = []
for k in ks.astype(int):
    scenario = Scenario(num_nodes=200, num_shards=int(k), beta=0.25,
                        smr_blocks=6, epoch_length=3, txs_per_block=4, seed=1)
    meter = run_world(scenario).meter
    totals.append(meter.smr_total("storage") / scenario.smr_blocks)
totals = np.array(totals)
for k, total in zip(ks.astype(int), totals):
    print(f"  K = {k:>3}: {total:>12.0f} bytes per main-chain block")

slope, intercept = np.polyfit(ks, totals, 1)
fit = slope * ks + intercept
r2 = 1.0 - ((totals - fit) ** 2).sum() / ((totals - totals.mean()) ** 2).sum()
print(f"\nlinear fit: {slope:.0f} bytes per extra shard, R^2 = {r2:.6f}")
