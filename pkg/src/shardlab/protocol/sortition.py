"""Hash sortition: block-proposer lotteries, chunk assignment, epoch leaders.

All three draws hash a node credential together with the SMR block number,
so they are unpredictable before the round yet verifiable by everyone after.
Keys here are plain identifiers; real deployments would use VRFs.
"""
from __future__ import annotations

from .hashing import HASH_SPACE, Sha256Oracle

__all__ = ["mining_lottery", "assign_chunk", "elect_epoch_leader"]

_DEFAULT_ORACLE = Sha256Oracle()


def mining_lottery(candidates, smr_no: int, kappa: int, oracle=None) -> dict:
    """Per shard, the kappa smallest hash values win the right to propose.

    ``candidates`` holds (node id, public key, chosen shard) triples; a node
    may enter at most once per SMR block. Returns {shard: [(node id, value),
    ...]} sorted by (value, node id), ties broken by node id.
    """
    oracle = oracle or _DEFAULT_ORACLE
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    seen = set()
    by_shard: dict = {}
    for node, pk, shard in candidates:
        if node in seen:
            raise ValueError(f"node {node} entered the lottery twice")
        seen.add(node)
        by_shard.setdefault(shard, []).append((oracle.value(pk, smr_no), node))
    winners = {}
    for shard, entries in by_shard.items():
        entries.sort()
        winners[shard] = [(node, value) for value, node in entries[:kappa]]
    return winners


def assign_chunk(public_key, smr_no: int, num_chunks: int, oracle=None) -> int:
    """Which coded chunk a node must fetch and vouch for this block."""
    oracle = oracle or _DEFAULT_ORACLE
    if num_chunks < 1:
        raise ValueError("need at least one chunk")
    return oracle.value(public_key, smr_no) % num_chunks


def elect_epoch_leader(
    secret_key, smr_no: int, shard: int, threshold: int, oracle=None
) -> bool:
    """Leader iff the keyed hash falls below the threshold."""
    oracle = oracle or _DEFAULT_ORACLE
    if not 0 <= threshold <= HASH_SPACE:
        raise ValueError("threshold outside the hash output range")
    return oracle.value(secret_key, smr_no, shard) < threshold
