"""Binary Merkle trees over byte-string leaves.

Leaf and interior hashes are domain-separated, odd nodes are promoted
unchanged, and proofs are (sibling, side) lists from leaf to root.
"""
from __future__ import annotations

import hashlib

__all__ = ["merkle_root", "merkle_proof", "verify_proof", "MerkleTree"]

_LEAF = b"\x00"
_NODE = b"\x01"


def _hash_leaf(data: bytes) -> bytes:
    return hashlib.sha256(_LEAF + data).digest()


def _hash_node(left: bytes, right: bytes) -> bytes:
    return hashlib.sha256(_NODE + left + right).digest()


class MerkleTree:
    def __init__(self, leaves):
        if not leaves:
            raise ValueError("merkle tree needs at least one leaf")
        self.num_leaves = len(leaves)
        level = [_hash_leaf(bytes(x)) for x in leaves]
        self.levels = [level]
        while len(level) > 1:
            nxt = []
            for i in range(0, len(level) - 1, 2):
                nxt.append(_hash_node(level[i], level[i + 1]))
            if len(level) % 2:
                nxt.append(level[-1])  # promote the odd node
            level = nxt
            self.levels.append(level)

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]

    def proof(self, index: int):
        """Membership proof for leaf ``index``: list of (sibling, leaf_is_left)."""
        if not 0 <= index < self.num_leaves:
            raise IndexError(f"leaf index {index} out of range")
        path = []
        for level in self.levels[:-1]:
            sibling = index ^ 1
            if sibling < len(level):
                path.append((level[sibling], index % 2 == 0))
            index //= 2
        return path


def merkle_root(leaves) -> bytes:
    return MerkleTree(leaves).root


def merkle_proof(leaves, index: int):
    return MerkleTree(leaves).proof(index)


def verify_proof(root: bytes, leaf: bytes, proof) -> bool:
    node = _hash_leaf(bytes(leaf))
    for sibling, leaf_is_left in proof:
        node = _hash_node(node, sibling) if leaf_is_left else _hash_node(sibling, node)
    return node == root
