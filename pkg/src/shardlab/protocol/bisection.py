"""Interactive bisection of a disputed state commitment.

The leader and a challenger agree on the pre-state of an epoch and disagree
on its final root. Each round the leader splits the current segment into
``branching`` sub-segments and posts claimed boundary roots; the challenger
names the first boundary where its own execution diverges. The recursion is
driven by a virtual segment length that is an exact power of the branching
factor, so the round count is always ceil(log_branching(B)) regardless of
where the fault sits; trailing sub-segments are clipped to the real range.

Once a single transaction is isolated it is posted on the log with a
pre-state witness and settled by direct re-execution (adjudicate).
"""
from __future__ import annotations

from dataclasses import dataclass

from .hashing import digest
from .log import DisputedTx
from .state import Payment, ToyState

__all__ = [
    "PrefixExecutor",
    "BisectionRound",
    "BisectionResult",
    "NoDisputeError",
    "WitnessError",
    "run_bisection",
    "build_dispute",
    "adjudicate",
]


class NoDisputeError(Exception):
    """Raised when the two views agree on the final root."""


class WitnessError(Exception):
    """Raised when a pre-state witness does not match the agreed root."""


class PrefixExecutor:
    """Replays a transaction list and serves prefix states and roots.

    ``fault_index`` models a faulty committer: every claimed root after that
    transition is deterministically corrupted, so the first divergence from
    an honest replay sits exactly at prefix fault_index + 1.
    """

    def __init__(self, genesis: ToyState, transactions, fault_index=None):
        self.transactions = list(transactions)
        if fault_index is not None and not 0 <= fault_index < len(self.transactions):
            raise ValueError("fault index outside the transaction range")
        self.fault_index = fault_index
        snapshots = [dict(genesis.balances)]
        state = genesis.copy()
        for tx in self.transactions:
            state.apply(tx)
            snapshots.append(dict(state.balances))
        self._snapshots = snapshots
        self._roots: dict = {}

    @property
    def length(self) -> int:
        return len(self.transactions)

    def state(self, prefix: int) -> ToyState:
        return ToyState(self._snapshots[prefix])

    def root(self, prefix: int) -> bytes:
        cached = self._roots.get(prefix)
        if cached is None:
            cached = ToyState(self._snapshots[prefix]).root()
            if self.fault_index is not None and prefix > self.fault_index:
                cached = digest("corrupt claim", cached)
            self._roots[prefix] = cached
        return cached


@dataclass(frozen=True)
class BisectionRound:
    lo: int
    hi: int
    boundaries: tuple  # S+1 prefix indices, clipped to hi
    claimed_roots: tuple  # leader's roots at boundaries[1:]
    disagreement: int  # first j >= 1 with a divergent boundary root


@dataclass(frozen=True)
class BisectionResult:
    index: int  # the disputed transition
    rounds: int
    transcript: tuple


def run_bisection(leader, challenger, branching: int) -> BisectionResult:
    if branching < 2:
        raise ValueError("branching factor must be at least 2")
    if leader.length != challenger.length:
        raise ValueError("views must cover the same transaction list")
    if leader.length < 1:
        raise ValueError("nothing to bisect")
    if leader.root(0) != challenger.root(0):
        raise ValueError("no agreed pre-state")
    if leader.root(leader.length) == challenger.root(leader.length):
        raise NoDisputeError("views agree on the final root")

    lo, hi = 0, leader.length
    virtual = 1
    while virtual < hi - lo:
        virtual *= branching
    transcript = []
    while virtual > 1:
        step = virtual // branching
        bounds = tuple(min(lo + j * step, hi) for j in range(branching + 1))
        claimed = tuple(leader.root(b) for b in bounds[1:])
        disagreement = next(
            j
            for j in range(1, branching + 1)
            if claimed[j - 1] != challenger.root(bounds[j])
        )
        transcript.append(
            BisectionRound(
                lo=lo,
                hi=hi,
                boundaries=bounds,
                claimed_roots=claimed,
                disagreement=disagreement,
            )
        )
        lo, hi = bounds[disagreement - 1], bounds[disagreement]
        virtual = step
    return BisectionResult(index=lo, rounds=len(transcript), transcript=tuple(transcript))


def build_dispute(executor, index: int) -> DisputedTx:
    """Single-transaction dispute with the full pre-state as witness."""
    tx = executor.transactions[index]
    witness = tuple(executor.state(index).items())
    return DisputedTx(sender=tx.sender, receiver=tx.receiver, amount=tx.amount, witness=witness)


def adjudicate(disputed: DisputedTx, agreed_pre_root: bytes, claimed_post_root: bytes) -> str:
    """Settle a one-transaction dispute by re-execution.

    The witness must reproduce the agreed pre-state root, otherwise the
    submitting side forfeits (WitnessError). Returns "leader" when the
    leader's claimed post-root matches honest execution, else "challenger".
    """
    state = ToyState(dict(disputed.witness))
    if state.root() != agreed_pre_root:
        raise WitnessError("witness does not match the agreed pre-state root")
    state.apply(Payment(disputed.sender, disputed.receiver, disputed.amount))
    return "leader" if state.root() == claimed_post_root else "challenger"
