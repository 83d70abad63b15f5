from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from shardlab.protocol.coding import (
    CodingFraud,
    InsufficientChunks,
    PRIME,
    bytes_to_symbols,
    decode_block,
    decode_or_fraud,
    decode_stripe,
    encode_block,
    encode_stripe,
    serialize_chunk,
    symbols_to_bytes,
)
from shardlab.protocol.merkle import MerkleTree


class TestStripeCode:
    def test_known_encoding(self):
        # f(x) = 7 + 3x over x = 0..3
        assert encode_stripe([7, 3], 4) == [7, 10, 13, 16]

    def test_known_decoding(self):
        assert decode_stripe({1: 10, 3: 16}, 2) == [7, 3]

    def test_identity_code(self):
        assert encode_stripe([5], 1) == [5]

    def test_rejects_p_above_n(self):
        with pytest.raises(ValueError):
            encode_stripe([1, 2, 3], 2)

    def test_rejects_out_of_field_symbol(self):
        with pytest.raises(ValueError):
            encode_stripe([PRIME], 4)

    def test_too_few_points(self):
        with pytest.raises(InsufficientChunks):
            decode_stripe({0: 7}, 2)

    @given(
        st.lists(st.integers(min_value=0, max_value=PRIME - 1), min_size=1, max_size=6),
        st.integers(min_value=0, max_value=1000),
    )
    def test_any_p_points_recover(self, data, shift):
        n = len(data) + 3
        encoded = encode_stripe(data, n)
        xs = sorted(range(n), key=lambda x: (x * 7 + shift) % n)[: len(data)]
        assert decode_stripe({x: encoded[x] for x in xs}, len(data)) == data


class TestBlockCode:
    def test_round_trip_all_subsets_small(self):
        # exhaustive any-p-of-n reconstruction for n up to 10
        for n in range(2, 11):
            for p in range(1, n + 1):
                symbols = [(11 * i + n) % PRIME for i in range(p)]
                block = encode_block(0, symbols, p, n)
                for subset in combinations(range(n), p):
                    take = {x: block.chunks[x] for x in subset}
                    assert decode_block(take, p) == symbols

    def test_round_trip_sampled_subsets_n64(self):
        import random

        rng = random.Random(64)
        p, n = 13, 64
        symbols = [rng.randrange(PRIME) for _ in range(3 * p)]
        block = encode_block(0, symbols, p, n)
        for _ in range(100):
            subset = rng.sample(range(n), p)
            take = {x: block.chunks[x] for x in subset}
            assert decode_block(take, p) == symbols

    def test_p_equals_n_identity(self):
        symbols = [3, 1, 4]
        block = encode_block(0, symbols, 3, 3)
        assert [c[0] for c in block.chunks] == encode_stripe(symbols, 3)
        assert decode_block(dict(enumerate(block.chunks)), 3) == symbols

    def test_multi_stripe_layout(self):
        symbols = [1, 2, 3, 4, 5, 6]
        block = encode_block(0, symbols, 2, 5)
        assert block.stripes == 3
        # chunk x stacks the three stripe polynomials' values at x
        assert block.chunks[0] == (1, 3, 5)
        assert block.chunks[1] == (1 + 2, 3 + 4, 5 + 6)

    def test_padding_short_final_stripe(self):
        block = encode_block(0, [9, 9, 9], 2, 4)
        assert block.stripes == 2
        recovered = decode_block({1: block.chunks[1], 3: block.chunks[3]}, 2)
        assert recovered == [9, 9, 9, 0]

    def test_proofs_verify_against_root(self):
        block = encode_block(2, [5, 6, 7, 8], 2, 6)
        values, proof = block.chunk_with_proof(4)
        from shardlab.protocol.merkle import verify_proof

        assert verify_proof(block.root, serialize_chunk(4, values), proof)


def _proven(block, indices, tree=None):
    tree = tree or MerkleTree(
        [serialize_chunk(i, c) for i, c in enumerate(block.chunks)]
    )
    return {i: (block.chunks[i], tree.proof(i)) for i in indices}


class TestDecodeOrFraud:
    def test_honest_block_decodes(self):
        symbols = bytes_to_symbols(b"payload bytes here")
        block = encode_block(1, symbols, 4, 9)
        out = decode_or_fraud(_proven(block, [8, 2, 5, 0]), block)
        assert symbols_to_bytes(out) == b"payload bytes here"

    def test_insufficient_chunks(self):
        block = encode_block(0, [1, 2, 3], 3, 5)
        with pytest.raises(InsufficientChunks):
            decode_or_fraud(_proven(block, [0, 4]), block)

    def test_bad_proofs_are_discarded(self):
        block = encode_block(0, [1, 2, 3], 3, 5)
        proven = _proven(block, [0, 1, 2])
        values, proof = proven[1]
        proven[1] = ((values[0] + 1,) + values[1:], proof)  # proof no longer matches
        with pytest.raises(InsufficientChunks):
            decode_or_fraud(proven, block)

    def test_corrupted_chunk_yields_fraud(self):
        # committed chunks [7,10,13,99]: x=3 tampered after encoding f(x)=7+3x
        block = encode_block(0, [7, 3], 2, 4)
        chunks = [(7,), (10,), (13,), (99,)]
        tree = MerkleTree([serialize_chunk(i, c) for i, c in enumerate(chunks)])
        block.chunks = chunks
        block.root = tree.root

        # decoding from {0, 3} fits 7 + 43722x (43722 = 92 * inv(3) mod PRIME)
        assert decode_block({0: (7,), 3: (99,)}, 2) == [7, 43722]

        out = decode_or_fraud(_proven(block, [0, 3], tree), block)
        assert isinstance(out, CodingFraud)
        assert out.root == block.root
        assert sorted(out.decoding_chunks) == [0, 3]
        # re-encoding gives f(1) = 43729 != 10, the first mismatch
        assert out.mismatch_index == 1

    def test_fraud_detected_from_any_decoding_set(self):
        block = encode_block(0, [7, 3], 2, 4)
        chunks = list(block.chunks)
        chunks[2] = (9999,)
        tree = MerkleTree([serialize_chunk(i, c) for i, c in enumerate(chunks)])
        block.chunks = chunks
        block.root = tree.root
        # decode set avoiding the bad chunk still exposes the mismatch at 2
        out = decode_or_fraud(_proven(block, [0, 1], tree), block)
        assert isinstance(out, CodingFraud)
        assert out.mismatch_index == 2


class TestByteFraming:
    @given(st.binary(min_size=0, max_size=200))
    @settings(max_examples=60)
    def test_round_trip(self, data):
        assert symbols_to_bytes(bytes_to_symbols(data)) == data

    def test_padding_symbols_are_ignored(self):
        symbols = bytes_to_symbols(b"ab") + [0, 0, 0]
        assert symbols_to_bytes(symbols) == b"ab"

    def test_corrupt_header_rejected(self):
        with pytest.raises(ValueError):
            symbols_to_bytes([0xFFFF, 0xFFFF, 0, 0])
