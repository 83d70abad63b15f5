import random
from itertools import permutations, product

import pytest

from shardlab.protocol.bisection import (
    NoDisputeError,
    PrefixExecutor,
    WitnessError,
    adjudicate,
    build_dispute,
    run_bisection,
)
from shardlab.protocol.state import Payment, ToyState


def executors(num_txs, fault, seed=0, accounts=6):
    rng = random.Random(seed)
    names = [f"acct{i}" for i in range(accounts)]
    genesis = ToyState({a: rng.randint(0, 50) for a in names})
    txs = [Payment(*rng.sample(names, 2), rng.randint(1, 8)) for _ in range(num_txs)]
    leader = PrefixExecutor(genesis, txs, fault_index=fault)
    challenger = PrefixExecutor(genesis, txs)
    return leader, challenger


class TestPrefixExecutor:
    def test_prefix_states_chain(self):
        genesis = ToyState({"a": 10, "b": 0})
        ex = PrefixExecutor(genesis, [Payment("a", "b", 4), Payment("b", "a", 1)])
        assert ex.state(0).balances == {"a": 10, "b": 0}
        assert ex.state(1).balances == {"a": 6, "b": 4}
        assert ex.state(2).balances == {"a": 7, "b": 3}

    def test_fault_corrupts_only_later_roots(self):
        leader, challenger = executors(10, fault=4)
        for i in range(5):
            assert leader.root(i) == challenger.root(i)
        for i in range(5, 11):
            assert leader.root(i) != challenger.root(i)

    def test_fault_index_must_be_in_range(self):
        with pytest.raises(ValueError):
            PrefixExecutor(ToyState({"a": 1}), [Payment("a", "b", 1)], fault_index=1)


class TestRunBisection:
    def test_thousand_txs_three_rounds(self):
        leader, challenger = executors(1000, fault=537)
        result = run_bisection(leader, challenger, branching=10)
        assert result.index == 537
        assert result.rounds == 3

    def test_single_tx_zero_rounds(self):
        leader, challenger = executors(1, fault=0)
        result = run_bisection(leader, challenger, branching=10)
        assert result.index == 0
        assert result.rounds == 0

    def test_no_dispute_error(self):
        _, challenger = executors(8, fault=None)
        with pytest.raises(NoDisputeError):
            run_bisection(challenger, challenger, branching=2)

    def test_mismatched_genesis_rejected(self):
        a = PrefixExecutor(ToyState({"a": 5}), [Payment("a", "b", 1)])
        b = PrefixExecutor(ToyState({"a": 6}), [Payment("a", "b", 1)])
        with pytest.raises(ValueError):
            run_bisection(a, b, branching=2)

    def test_branching_below_two_rejected(self):
        leader, challenger = executors(4, fault=1)
        with pytest.raises(ValueError):
            run_bisection(leader, challenger, branching=1)

    def test_random_injections_localize_exactly(self):
        rng = random.Random(20260814)
        for trial in range(200):
            branching = rng.choice([2, 10])
            num_txs = rng.randint(1, 4096)
            fault = rng.randrange(num_txs)
            leader, challenger = executors(num_txs, fault, seed=trial)
            result = run_bisection(leader, challenger, branching)
            assert result.index == fault
            expected_rounds = 0  # smallest t with branching**t >= num_txs
            while branching**expected_rounds < num_txs:
                expected_rounds += 1
            assert result.rounds == expected_rounds

    def test_transcript_segments_narrow(self):
        leader, challenger = executors(500, fault=210)
        result = run_bisection(leader, challenger, branching=10)
        spans = [rnd.hi - rnd.lo for rnd in result.transcript]
        assert spans[0] == 500
        assert all(a >= b for a, b in zip(spans, spans[1:]))
        final = result.transcript[-1]
        assert final.boundaries[final.disagreement] - final.boundaries[final.disagreement - 1] == 1


class TestAdjudicate:
    def test_honest_leader_wins(self):
        leader, challenger = executors(50, fault=None, seed=3)
        dispute = build_dispute(leader, 17)
        verdict = adjudicate(dispute, leader.root(17), leader.root(18))
        assert verdict == "leader"

    def test_faulty_claim_loses(self):
        leader, challenger = executors(50, fault=17, seed=3)
        dispute = build_dispute(challenger, 17)
        verdict = adjudicate(dispute, challenger.root(17), leader.root(18))
        assert verdict == "challenger"

    def test_overdraft_acceptance_loses(self):
        # leader pretends an overdraft executed
        state = ToyState({"a": 2, "b": 0})
        lie = ToyState({"a": 0, "b": 2}).root()
        dispute = build_dispute(PrefixExecutor(state, [Payment("a", "b", 10)]), 0)
        assert adjudicate(dispute, state.root(), lie) == "challenger"

    def test_bad_witness_raises(self):
        state = ToyState({"a": 5})
        dispute = build_dispute(PrefixExecutor(state, [Payment("a", "b", 1)]), 0)
        with pytest.raises(WitnessError):
            adjudicate(dispute, ToyState({"a": 6}).root(), state.root())

    def test_exhaustive_small_disputes(self):
        # all 3-account pre-states with balances <= 3, all sender/receiver
        # pairs, amounts 1..4, leader claiming honest or corrupted roots
        names = ("x", "y", "z")
        for balances in product(range(4), repeat=3):
            pre = ToyState(dict(zip(names, balances)))
            for sender, receiver in permutations(names, 2):
                for amount in range(1, 5):
                    tx = Payment(sender, receiver, amount)
                    post = pre.copy()
                    post.apply(tx)
                    dispute = build_dispute(PrefixExecutor(pre, [tx]), 0)
                    assert adjudicate(dispute, pre.root(), post.root()) == "leader"
                    wrong = ToyState({"x": 99}).root()
                    assert adjudicate(dispute, pre.root(), wrong) == "challenger"
