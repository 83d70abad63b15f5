"""Toy payment state machine plus shard-ledger derivation from the log.

Execution is deliberately minimal: accounts hold nonnegative integer
balances and transactions are single transfers. That is enough to exercise
sanitization (invalid transactions are skipped, not rejected wholesale) and
to give the bisection game something real to dispute.
"""
from __future__ import annotations

from dataclasses import dataclass

from .availability import tally_availability
from .hashing import digest
from .merkle import merkle_root

__all__ = ["Payment", "ToyState", "sanitize_and_execute", "derive_shard_ledger"]


@dataclass(frozen=True)
class Payment:
    sender: str
    receiver: str
    amount: int


class ToyState:
    """Account -> balance map with a Merkle root over the sorted entries."""

    def __init__(self, balances=None):
        self.balances = dict(balances or {})
        for acct, bal in self.balances.items():
            if bal < 0:
                raise ValueError(f"negative balance for {acct!r}")

    def copy(self) -> "ToyState":
        return ToyState(self.balances)

    def balance(self, account: str) -> int:
        return self.balances.get(account, 0)

    def root(self) -> bytes:
        if not self.balances:
            return digest("empty state")
        leaves = [
            f"{acct}={bal}".encode() for acct, bal in sorted(self.balances.items())
        ]
        return merkle_root(leaves)

    def is_valid(self, tx: Payment) -> bool:
        return (
            isinstance(tx.amount, int)
            and tx.amount >= 1
            and tx.sender != tx.receiver
            and self.balance(tx.sender) >= tx.amount
        )

    def apply(self, tx: Payment) -> bool:
        """Execute if valid; returns whether the transaction counted."""
        if not self.is_valid(tx):
            return False
        self.balances[tx.sender] -= tx.amount
        self.balances[tx.receiver] = self.balance(tx.receiver) + tx.amount
        return True

    def items(self):
        return sorted(self.balances.items())

    def __eq__(self, other):
        return isinstance(other, ToyState) and self.balances == other.balances

    def __repr__(self):
        return f"ToyState({self.balances!r})"


def sanitize_and_execute(transactions, genesis: ToyState):
    """Apply transactions in order, skipping invalid ones.

    Returns (bitmask, final state): bit t is 1 iff transaction t executed.
    The genesis state is not mutated. Replays are exact, so every honest
    node derives the same mask and the same final root.
    """
    state = genesis.copy()
    mask = tuple(1 if state.apply(tx) else 0 for tx in transactions)
    return mask, state


def derive_shard_ledger(log, shard: int, num_nodes: int) -> list:
    """Ordered digests of the shard's blocks that survived availability
    voting and fraud proofs.

    A block with no votes yet is kept (voting may still be in flight); a
    block whose recorded votes fail the strict-majority tally is dropped, as
    is any block with a fraud proof anywhere in the log.
    """
    fraud = log.fraud_proven()
    ledger = []
    for _, pointer in log.shard_pointers(shard):
        if pointer.digest in fraud:
            continue
        votes = log.votes_for(pointer.digest)
        if votes and not tally_availability(votes, num_nodes):
            continue
        ledger.append(pointer.digest)
    return ledger
