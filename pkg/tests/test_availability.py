from itertools import product

import pytest

from shardlab.protocol.availability import (
    availability_soundness_oracle,
    num_adversarial,
    required_data_chunks,
    tally_availability,
)
from shardlab.protocol.log import AvailabilityVote

D = bytes(32)


def votes(flags):
    return [
        AvailabilityVote(voter=i, digest=D, available=f) for i, f in enumerate(flags)
    ]


class TestTally:
    def test_majority_certifies(self):
        assert tally_availability(votes([1, 1, 1, 0, 0]), 5)

    def test_minority_fails(self):
        assert not tally_availability(votes([1, 1, 0, 0, 0]), 5)

    def test_tie_fails(self):
        assert not tally_availability(votes([1, 1, 0, 0]), 4)

    def test_missing_votes_count_against(self):
        assert not tally_availability(votes([1, 1]), 5)

    def test_only_first_vote_counts(self):
        two_faced = [
            AvailabilityVote(voter=0, digest=D, available=False),
            AvailabilityVote(voter=0, digest=D, available=True),
            AvailabilityVote(voter=1, digest=D, available=True),
        ]
        assert not tally_availability(two_faced, 2)


class TestRequiredChunks:
    def test_hundred_node_example(self):
        assert required_data_chunks(0.3, 100) == 20

    def test_small_network(self):
        assert required_data_chunks(0.4, 10) == 1

    def test_exact_integer_boundary(self):
        # float noise on (0.5 - 0.2) * 10 = 3 must not round up to 4
        assert required_data_chunks(0.2, 10) == 3

    def test_rejects_half_and_above(self):
        with pytest.raises(ValueError):
            required_data_chunks(0.5, 100)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            required_data_chunks(-0.1, 100)

    def test_num_adversarial_floor(self):
        assert num_adversarial(0.3, 10) == 3
        assert num_adversarial(0.0, 10) == 0
        assert num_adversarial(0.49, 100) == 49


class TestSoundnessOracle:
    def test_never_violated_at_required_p(self):
        for num_nodes in range(1, 13):
            for beta in (0.0, 0.1, 0.2, 0.3, 0.4, 0.49):
                p = required_data_chunks(beta, num_nodes)
                honest = num_nodes - num_adversarial(beta, num_nodes)
                for holders in range(honest + 1):
                    assert not availability_soundness_oracle(
                        holders, beta, num_nodes, p
                    )

    def test_oversized_p_is_detectably_unsound(self):
        # sanity that the oracle can fire: N=11, beta=0.4 needs only p=2,
        # but a code needing 3 chunks could certify with just 2 holders
        assert availability_soundness_oracle(2, 0.4, 11, 3)

    def test_rejects_half_and_above(self):
        with pytest.raises(ValueError):
            availability_soundness_oracle(1, 0.6, 10, 1)

    def test_rejects_impossible_holder_count(self):
        with pytest.raises(ValueError):
            availability_soundness_oracle(8, 0.4, 10, 1)

    def test_exhaustive_vote_patterns_small(self):
        # every honest holding pattern over N <= 12 with all adversarial
        # nodes lying yes: whenever the tally certifies, the honest holders
        # alone must reach the decoding threshold
        for num_nodes in range(2, 13):
            for beta in (0.0, 0.2, 0.4):
                adversarial = num_adversarial(beta, num_nodes)
                honest = num_nodes - adversarial
                p = required_data_chunks(beta, num_nodes)
                for pattern in product([False, True], repeat=honest):
                    flags = [True] * adversarial + list(pattern)
                    certified = tally_availability(votes(flags), num_nodes)
                    if certified:
                        assert sum(pattern) >= p
