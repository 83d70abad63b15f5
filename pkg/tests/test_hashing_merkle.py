import pytest
from hypothesis import given, strategies as st

from shardlab.protocol.hashing import (
    HASH_SPACE,
    InjectedOracle,
    Sha256Oracle,
    digest,
    encode_parts,
)
from shardlab.protocol.merkle import MerkleTree, merkle_proof, merkle_root, verify_proof


class TestEncodeParts:
    def test_deterministic(self):
        assert encode_parts("a", 1, b"\x00") == encode_parts("a", 1, b"\x00")

    def test_type_and_length_framing(self):
        # ("ab",) and ("a", "b") must not collide
        assert encode_parts("ab") != encode_parts("a", "b")
        # int 0x6162 and str "ab" must not collide either
        assert encode_parts(0x6162) != encode_parts("ab")

    def test_rejects_unknown_type(self):
        with pytest.raises(TypeError):
            encode_parts(1.5)

    def test_digest_is_32_bytes(self):
        assert len(digest("x", 7)) == 32


class TestOracles:
    def test_sha_oracle_range(self):
        v = Sha256Oracle().value("pk1", 4)
        assert 0 <= v < HASH_SPACE

    def test_injected_lookup_and_fallback(self):
        oracle = InjectedOracle({("pk1", 4): 13})
        assert oracle.value("pk1", 4) == 13
        fallback = oracle.value("pk2", 4)
        assert fallback == Sha256Oracle().value("pk2", 4)

    def test_strict_mode_raises_on_miss(self):
        oracle = InjectedOracle({("pk1", 4): 13}, strict=True)
        assert oracle.value("pk1", 4) == 13
        with pytest.raises(KeyError):
            oracle.value("pk2", 4)


class TestMerkle:
    def test_single_leaf(self):
        tree = MerkleTree([b"only"])
        assert verify_proof(tree.root, b"only", tree.proof(0))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            MerkleTree([])

    @pytest.mark.parametrize("count", [1, 2, 3, 4, 5, 7, 8, 13])
    def test_all_proofs_verify(self, count):
        leaves = [f"leaf-{i}".encode() for i in range(count)]
        tree = MerkleTree(leaves)
        for i, leaf in enumerate(leaves):
            assert verify_proof(tree.root, leaf, tree.proof(i))

    def test_tampered_leaf_fails(self):
        leaves = [b"a", b"b", b"c", b"d", b"e"]
        tree = MerkleTree(leaves)
        proof = tree.proof(2)
        assert not verify_proof(tree.root, b"x", proof)

    def test_wrong_index_fails(self):
        leaves = [b"a", b"b", b"c", b"d"]
        tree = MerkleTree(leaves)
        assert not verify_proof(tree.root, leaves[1], tree.proof(0))

    def test_leaf_node_domains_differ(self):
        # a node hash reused as a leaf must not reproduce the root
        t2 = MerkleTree([b"a", b"b"])
        assert MerkleTree([t2.root]).root != t2.root

    def test_helpers_match_class(self):
        leaves = [b"a", b"b", b"c"]
        tree = MerkleTree(leaves)
        assert merkle_root(leaves) == tree.root
        assert merkle_proof(leaves, 1) == tree.proof(1)

    @given(
        st.lists(st.binary(min_size=0, max_size=8), min_size=1, max_size=20),
        st.integers(min_value=0, max_value=19),
    )
    def test_random_shapes_verify(self, leaves, index):
        index %= len(leaves)
        tree = MerkleTree(leaves)
        assert verify_proof(tree.root, leaves[index], tree.proof(index))
