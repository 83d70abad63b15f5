"""End-to-end runs of the world simulator under each fault type."""
import dataclasses

import pytest

from shardlab.protocol import (
    OrderedLog,
    Scenario,
    decode_block,
    parse_payments,
    run_world,
    symbols_to_bytes,
)


def scenario(**overrides):
    base = dict(
        num_nodes=20,
        num_shards=4,
        beta=0.25,
        smr_blocks=8,
        epoch_length=4,
        branching=3,
        txs_per_block=6,
        seed=7,
    )
    base.update(overrides)
    return Scenario(**base)


class TestHonestWorld:
    def test_clean_run(self):
        res = run_world(scenario())
        assert len(res.blocks) == 32  # kappa=1, every shard populated
        assert res.certified == set(res.blocks)
        assert not res.pending
        assert not res.fraud_proven
        assert not res.disputes
        assert all(verdict == "accepted" for _, _, verdict in res.commitments)
        assert len(res.commitments) == 8  # 2 epochs x 4 shards

    def test_certified_blocks_decode_to_their_payloads(self):
        res = run_world(scenario(smr_blocks=4))
        p = 5  # ceil((0.5 - 0.25) * 20)
        for digest in res.certified:
            block = res.blocks[digest]
            assert block.data_symbols == p
            take = {x: block.chunks[x] for x in range(block.num_chunks - p, block.num_chunks)}
            symbols = decode_block(take, p)
            assert parse_payments(symbols_to_bytes(symbols)) == block.transactions

    def test_shard_state_conserves_units(self):
        res = run_world(scenario())
        for state in res.shard_states.values():
            assert sum(state.balances.values()) == 6 * 50

    def test_deterministic_replay(self):
        first = run_world(scenario())
        second = run_world(scenario())
        assert first.log.dump() == second.log.dump()
        assert first.meter.counters == second.meter.counters

    def test_dump_parse_round_trip(self):
        res = run_world(scenario())
        text = res.log.dump()
        assert OrderedLog.parse(text).dump() == text

    def test_different_seeds_diverge(self):
        assert run_world(scenario()).log.dump() != run_world(scenario(seed=8)).log.dump()


class TestFaults:
    def test_miscoded_block_is_fraud_proven_and_excluded(self):
        # smr 1 / shard 1 is mined by node 17, an adversarial id at seed 7
        res = run_world(scenario(miscode=((1, 1),)))
        assert len(res.fraud_proven) == 1
        bad = next(iter(res.fraud_proven))
        assert res.blocks[bad].shard == 1
        assert bad in res.certified  # it passed the vote, then got caught
        assert bad not in res.ledger(1)
        assert len(res.ledger(1)) == 7

    def test_withheld_block_never_certifies(self):
        # smr 3 / shard 0 is mined by node 16, an adversarial id at seed 7
        res = run_world(scenario(withhold=((3, 0),)))
        assert len(res.pending) == 1
        bad = next(iter(res.pending))
        assert res.blocks[bad].shard == 0
        assert bad not in res.certified
        assert bad not in res.ledger(0)

    def test_censorship_votes_lose_to_honest_majority(self):
        res = run_world(scenario(censor_shard=2))
        assert len(res.ledger(2)) == 8
        assert not res.pending

    def test_bad_commitment_is_challenged_and_rejected(self):
        res = run_world(scenario(bad_commitment=((0, 3),)))
        assert (0, 3, "rejected") in res.commitments
        assert len(res.disputes) == 1
        epoch, shard, index, winner = res.disputes[0]
        assert (epoch, shard, winner) == (0, 3, "challenger")
        # the log carries the full interaction for replay
        tags = [type(e).__name__ for _, e in res.log.entries]
        assert "Challenge" in tags and "ChallengeReply" in tags and "DisputedTx" in tags

    def test_faults_only_fire_for_adversarial_miners(self):
        # shard 0 at smr 0 is mined by node 0 (honest): fault spec is inert
        res = run_world(scenario(miscode=tuple((s, k) for s in range(8) for k in range(4))))
        honest_minted = [
            e for _, e in res.log.shard_pointers() if e.miner not in range(15, 20)
        ]
        assert honest_minted
        assert all(
            digest not in res.fraud_proven
            for digest in (e.digest for e in honest_minted)
        )


class TestResourceMetering:
    def test_all_log_categories_metered(self):
        res = run_world(
            scenario(miscode=((1, 1),), bad_commitment=((0, 3),), rotation_period=2)
        )
        meter = res.meter
        for category in (
            "shard_pointers",
            "availability_votes",
            "state_commitments",
            "fraud_proofs",
            "challenge_interactions",
            "chunk_traffic",
            "rotation_sync",
            "shard_processing",
        ):
            assert meter.total(category, "communication") > 0, category

    def test_log_bytes_match_meter(self):
        res = run_world(scenario())
        logged = len(res.log.dump().encode())
        log_side = sum(
            res.meter.total(c, "storage")
            for c in (
                "shard_pointers",
                "availability_votes",
                "state_commitments",
                "fraud_proofs",
                "challenge_interactions",
            )
        )
        assert log_side == logged

    def test_overhead_ratio_defined(self):
        ratios = run_world(scenario()).meter.overhead_ratio()
        assert all(v is not None and v > 0 for v in ratios.values())


class TestScenarioValidation:
    def test_rejects_beta_half(self):
        with pytest.raises(ValueError):
            scenario(beta=0.5)

    def test_rejects_single_node(self):
        with pytest.raises(ValueError):
            scenario(num_nodes=1)

    def test_rejects_bad_branching(self):
        with pytest.raises(ValueError):
            scenario(branching=1)

    def test_fault_lists_normalized(self):
        sc = scenario(miscode=[["1", "0"]])
        assert sc.miscode == ((1, 0),)

    def test_is_dataclass_with_defaults(self):
        fields = {f.name for f in dataclasses.fields(Scenario)}
        assert {"num_nodes", "num_shards", "beta", "smr_blocks", "censor_shard"} <= fields
