import random

import pytest

from shardlab.protocol.log import (
    AvailabilityVote,
    CodingFraudProof,
    OrderedLog,
    ShardPointer,
)
from shardlab.protocol.state import (
    Payment,
    ToyState,
    derive_shard_ledger,
    sanitize_and_execute,
)

A = bytes([1] * 32)
B = bytes([2] * 32)
C = bytes([3] * 32)


class TestToyState:
    def test_rejects_negative_balance(self):
        with pytest.raises(ValueError):
            ToyState({"a": -1})

    def test_missing_account_reads_zero(self):
        assert ToyState({}).balance("ghost") == 0

    def test_root_is_order_insensitive(self):
        assert ToyState({"a": 1, "b": 2}).root() == ToyState({"b": 2, "a": 1}).root()

    def test_root_tracks_balances(self):
        assert ToyState({"a": 1}).root() != ToyState({"a": 2}).root()

    def test_empty_state_has_a_root(self):
        assert len(ToyState({}).root()) == 32

    def test_copy_is_independent(self):
        s = ToyState({"a": 5})
        t = s.copy()
        t.apply(Payment("a", "b", 3))
        assert s.balance("a") == 5 and t.balance("a") == 2


class TestSanitizeAndExecute:
    def test_valid_transfer(self):
        mask, state = sanitize_and_execute(
            [Payment("a", "b", 3)], ToyState({"a": 5, "b": 0})
        )
        assert mask == (1,)
        assert state.balances == {"a": 2, "b": 3}

    def test_overdraft_skipped(self):
        mask, state = sanitize_and_execute(
            [Payment("a", "b", 10)], ToyState({"a": 2, "b": 0})
        )
        assert mask == (0,)
        assert state.balances == {"a": 2, "b": 0}

    def test_self_payment_and_zero_amount_skipped(self):
        genesis = ToyState({"a": 5})
        mask, state = sanitize_and_execute(
            [Payment("a", "a", 1), Payment("a", "b", 0), Payment("a", "b", -2)], genesis
        )
        assert mask == (0, 0, 0)
        assert state == genesis

    def test_genesis_not_mutated(self):
        genesis = ToyState({"a": 5})
        sanitize_and_execute([Payment("a", "b", 1)], genesis)
        assert genesis.balances == {"a": 5}

    def test_receiver_account_created(self):
        _, state = sanitize_and_execute([Payment("a", "new", 2)], ToyState({"a": 2}))
        assert state.balance("new") == 2 and state.balance("a") == 0

    def test_long_ledger_replays_identically(self):
        rng = random.Random(11)
        accounts = [f"acct{i}" for i in range(5)]
        txs = [
            Payment(*rng.sample(accounts, 2), rng.randint(1, 9)) for _ in range(1000)
        ]
        genesis = ToyState({a: 20 for a in accounts})
        mask1, state1 = sanitize_and_execute(txs, genesis)
        mask2, state2 = sanitize_and_execute(txs, genesis)
        assert mask1 == mask2
        assert state1.root() == state2.root()
        assert sum(state1.balances.values()) == 100  # transfers conserve units


def log_with_pointers():
    log = OrderedLog()
    log.append(0, ShardPointer(shard=0, digest=A, miner=1, lottery=4))
    log.append(1, ShardPointer(shard=1, digest=B, miner=2, lottery=4))
    log.append(2, ShardPointer(shard=0, digest=C, miner=3, lottery=4))
    return log


class TestDeriveShardLedger:
    def test_filters_by_shard_in_order(self):
        assert derive_shard_ledger(log_with_pointers(), 0, 5) == [A, C]
        assert derive_shard_ledger(log_with_pointers(), 1, 5) == [B]

    def test_empty_log(self):
        assert derive_shard_ledger(OrderedLog(), 0, 5) == []

    def test_unvoted_blocks_are_kept(self):
        # voting may still be in flight; absence of votes is not rejection
        log = log_with_pointers()
        assert derive_shard_ledger(log, 0, 5) == [A, C]

    def test_failed_tally_excludes(self):
        log = log_with_pointers()
        for voter in range(5):
            log.append(3, AvailabilityVote(voter=voter, digest=A, available=voter < 2))
        assert derive_shard_ledger(log, 0, 5) == [C]

    def test_majority_keeps_block(self):
        log = log_with_pointers()
        for voter in range(5):
            log.append(3, AvailabilityVote(voter=voter, digest=A, available=voter < 3))
        assert derive_shard_ledger(log, 0, 5) == [A, C]

    def test_fraud_proof_excludes_everywhere(self):
        log = log_with_pointers()
        log.append(3, CodingFraudProof(digest=A, chunks=((0, (1,)),), mismatch=2))
        assert derive_shard_ledger(log, 0, 5) == [C]
        # and the exclusion also holds for derivations after more entries
        log.append(4, ShardPointer(shard=0, digest=bytes([9] * 32), miner=1, lottery=1))
        assert A not in derive_shard_ledger(log, 0, 5)
