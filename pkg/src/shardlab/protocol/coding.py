"""Erasure coding for data availability: a polynomial code over GF(65537).

A block is a list of 16-bit symbols. Symbols are grouped into stripes of
``p``; stripe s defines the polynomial f_s(x) = sum_j stripe[j] * x^j and
chunk i carries the evaluations (f_0(i), f_1(i), ...) for i = 0..n-1. Any p
distinct chunks determine every stripe polynomial exactly, hence the block.

The chunk commitment is a Merkle root over the serialized chunks. A decoder
that reconstructs from p chunks re-encodes and compares against the
commitment; a mismatch yields a coding-fraud proof carrying the p decoding
chunks. That evidence is proportional to the block size, not logarithmic in
it; compact committee-style proofs are out of scope here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .merkle import MerkleTree, verify_proof

__all__ = [
    "PRIME",
    "encode_stripe",
    "decode_stripe",
    "bytes_to_symbols",
    "symbols_to_bytes",
    "CodedBlock",
    "CodingFraud",
    "InsufficientChunks",
    "encode_block",
    "serialize_chunk",
    "chunk_bytes",
    "decode_block",
    "decode_or_fraud",
]

PRIME = 65537  # Fermat prime; symbols are 16-bit words, always < PRIME


def _validate_symbols(symbols) -> list[int]:
    out = []
    for s in symbols:
        v = int(s)
        if not 0 <= v < PRIME:
            raise ValueError(f"symbol {v} outside GF({PRIME})")
        out.append(v)
    return out


def _vandermonde(xs, width: int) -> np.ndarray:
    # rows x^0 .. x^(width-1) mod PRIME, one column per evaluation point
    xs = np.asarray(xs, dtype=np.int64) % PRIME
    rows = [np.ones(len(xs), dtype=np.int64)]
    for _ in range(width - 1):
        rows.append(rows[-1] * xs % PRIME)
    return np.stack(rows)


def encode_stripe(data, n: int) -> list[int]:
    """Evaluate the polynomial with coefficients ``data`` at x = 0..n-1."""
    data = _validate_symbols(data)
    p = len(data)
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    if n >= PRIME:
        raise ValueError(f"n={n} exceeds the field's {PRIME - 1} evaluation points")
    coeffs = np.asarray(data, dtype=np.int64)
    vand = _vandermonde(range(n), p)
    return [int(v) for v in coeffs @ vand % PRIME]


def _lagrange_coefficient_matrix(xs: list[int]) -> np.ndarray:
    """Matrix L with column j = coefficients of the j-th Lagrange basis poly."""
    p = len(xs)
    master = np.zeros(p + 1, dtype=np.int64)
    master[0] = 1
    for x in xs:  # running product of (X - x)
        shifted = np.roll(master, 1)
        master = (shifted - x * master) % PRIME
    cols = np.empty((p, p), dtype=np.int64)
    for j, xj in enumerate(xs):
        # synthetic division of the master polynomial by (X - xj)
        quotient = np.zeros(p, dtype=np.int64)
        carry = 0
        for k in range(p, 0, -1):
            carry = (master[k] + carry * xj) % PRIME
            quotient[k - 1] = carry
        denom = 1
        for m, xm in enumerate(xs):
            if m != j:
                denom = denom * (xj - xm) % PRIME
        cols[:, j] = quotient * pow(int(denom), PRIME - 2, PRIME) % PRIME
    return cols


def decode_stripe(points: dict, p: int) -> list[int]:
    """Interpolate the degree-(p-1) polynomial through p (x, value) points."""
    if len(points) < p:
        raise InsufficientChunks(f"need {p} points, got {len(points)}")
    xs = sorted(points)[:p]
    if len(set(x % PRIME for x in xs)) != p:
        raise ValueError("evaluation points must be distinct in the field")
    ys = np.asarray([points[x] % PRIME for x in xs], dtype=np.int64)
    coeffs = _lagrange_coefficient_matrix(xs) @ ys % PRIME
    return [int(c) for c in coeffs]


def bytes_to_symbols(data: bytes) -> list[int]:
    """16-bit big-endian words with a length header for exact round-trips."""
    framed = len(data).to_bytes(4, "big") + data
    if len(framed) % 2:
        framed += b"\x00"
    return [int.from_bytes(framed[i : i + 2], "big") for i in range(0, len(framed), 2)]


def symbols_to_bytes(symbols) -> bytes:
    raw = b"".join(int(s).to_bytes(2, "big") for s in symbols)
    length = int.from_bytes(raw[:4], "big")
    if length > len(raw) - 4:
        raise ValueError("corrupt length header")
    return raw[4 : 4 + length]


def serialize_chunk(index: int, values) -> bytes:
    body = b"".join(int(v).to_bytes(3, "big") for v in values)
    return index.to_bytes(4, "big") + body


@dataclass
class CodedBlock:
    shard: int
    data_symbols: int  # p
    num_chunks: int  # n
    stripes: int
    chunks: list  # n tuples, one symbol per stripe
    root: bytes
    transactions: tuple = ()  # the payload the symbols serialize, when known

    def chunk_with_proof(self, index: int):
        tree = MerkleTree([serialize_chunk(i, c) for i, c in enumerate(self.chunks)])
        return self.chunks[index], tree.proof(index)


@dataclass
class CodingFraud:
    """Evidence that a committed root is not a correct encoding."""

    root: bytes
    decoding_chunks: dict  # x -> chunk tuple, exactly p of them
    mismatch_index: int


class InsufficientChunks(Exception):
    pass


def encode_block(shard: int, symbols, p: int, n: int) -> CodedBlock:
    symbols = _validate_symbols(symbols)
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    if n >= PRIME:
        raise ValueError(f"n={n} exceeds the field's {PRIME - 1} evaluation points")
    if not symbols:
        symbols = [0]
    stripes = -(-len(symbols) // p)
    padded = symbols + [0] * (stripes * p - len(symbols))
    coeffs = np.asarray(padded, dtype=np.int64).reshape(stripes, p)
    evals = coeffs @ _vandermonde(range(n), p) % PRIME  # (stripes, n)
    chunks = [tuple(int(v) for v in evals[:, i]) for i in range(n)]
    root = MerkleTree([serialize_chunk(i, c) for i, c in enumerate(chunks)]).root
    return CodedBlock(
        shard=shard, data_symbols=p, num_chunks=n, stripes=stripes, chunks=chunks, root=root
    )


def chunk_bytes(block: CodedBlock) -> int:
    """Serialized size of one chunk (3 bytes per stripe symbol plus index)."""
    return 4 + 3 * block.stripes


def decode_block(chunk_map: dict, p: int) -> list[int]:
    """Reconstruct the padded symbol list from >= p indexed chunks."""
    if len(chunk_map) < p:
        raise InsufficientChunks(f"need {p} chunks, got {len(chunk_map)}")
    xs = sorted(chunk_map)[:p]
    stripes = len(chunk_map[xs[0]])
    lagrange = _lagrange_coefficient_matrix(xs)
    ys = np.asarray([chunk_map[x] for x in xs], dtype=np.int64)  # (p, stripes)
    coeffs = (lagrange @ ys % PRIME).T  # (stripes, p)
    return [int(v) for v in coeffs.reshape(-1)]


def decode_or_fraud(proven_chunks: dict, header, hash_check: bool = True):
    """Reconstruct a block or produce fraud evidence against its commitment.

    ``proven_chunks`` maps chunk index -> (values, merkle proof). Proofs are
    checked against ``header.root`` when ``hash_check`` is set; invalid ones
    are discarded. With at least p surviving chunks the block is decoded and
    re-encoded; any disagreement with the committed chunk list is fraud.
    """
    p, n = header.data_symbols, header.num_chunks
    valid = {}
    for idx, (values, proof) in sorted(proven_chunks.items()):
        if hash_check and not verify_proof(header.root, serialize_chunk(idx, values), proof):
            continue
        valid[idx] = tuple(int(v) for v in values)
    if len(valid) < p:
        raise InsufficientChunks(f"only {len(valid)} proven chunks, need {p}")
    take = {x: valid[x] for x in sorted(valid)[:p]}
    symbols = decode_block(take, p)
    reencoded = encode_block(header.shard, symbols, p, n)
    if reencoded.root == header.root:
        return symbols
    mismatch = next(
        i for i in range(n) if i not in take  # decoding points always re-evaluate exactly
        and reencoded.chunks[i] != _committed_chunk(header, i)
    )
    return CodingFraud(root=header.root, decoding_chunks=take, mismatch_index=mismatch)


def _committed_chunk(header, index: int):
    # the simulator keeps full chunk lists on headers; a real node would
    # compare against the proven chunk it holds
    return tuple(int(v) for v in header.chunks[index])
