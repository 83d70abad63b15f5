"""Availability voting and the soundness of the vote-threshold coding rate.

A block is certified when a strict majority of nodes vote that their
assigned chunk arrived. With adversarial voters capped at a beta fraction,
setting the data-chunk count p = ceil((0.5 - beta) * N) makes certification
sound: any winning tally forces at least p honest chunk holders, enough to
reconstruct the block.
"""
from __future__ import annotations

import math

__all__ = [
    "required_data_chunks",
    "num_adversarial",
    "tally_availability",
    "availability_soundness_oracle",
]


def required_data_chunks(beta: float, num_nodes: int) -> int:
    """Data chunks p tied to the vote threshold: ceil((0.5 - beta) * N)."""
    if beta >= 0.5:
        raise ValueError("adversarial fraction must be below one half")
    if beta < 0:
        raise ValueError("adversarial fraction must be nonnegative")
    if num_nodes < 1:
        raise ValueError("need at least one node")
    # round before ceil so float noise cannot bump an exact integer upward
    return max(1, math.ceil(round((0.5 - beta) * num_nodes, 9)))


def num_adversarial(beta: float, num_nodes: int) -> int:
    """Adversarial node count floor(beta * N), guarded against float noise."""
    if not 0 <= beta <= 1:
        raise ValueError("beta must lie in [0, 1]")
    return int(beta * num_nodes + 1e-9)


def tally_availability(votes, num_nodes: int) -> bool:
    """Strict-majority certification; only each node's first vote counts."""
    seen = set()
    yes = 0
    for vote in votes:
        if vote.voter in seen:
            continue
        seen.add(vote.voter)
        if vote.available:
            yes += 1
    return 2 * yes > num_nodes


def availability_soundness_oracle(
    honest_holders: int, beta: float, num_nodes: int, data_chunks: int
) -> bool:
    """Whether a majority could certify while honest holders cannot decode.

    Every adversarial node may lie with a yes vote; honest nodes vote yes
    only when they actually hold their chunk. Returns True only on a
    soundness violation, so with p = required_data_chunks this is always
    False.
    """
    if beta >= 0.5:
        raise ValueError("adversarial fraction must be below one half")
    adversarial = num_adversarial(beta, num_nodes)
    if not 0 <= honest_holders <= num_nodes - adversarial:
        raise ValueError("holder count exceeds the honest population")
    certifiable = 2 * (adversarial + honest_holders) > num_nodes
    return certifiable and honest_holders < data_chunks
