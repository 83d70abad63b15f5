"""Append-only ordered log: the consensus substrate every node replays.

Entries are tagged with the SMR block number that carried them. Votes, fraud
proofs and challenges must reference a digest already present in the log, so
a log accepted entry-by-entry is internally consistent by construction.

The dump format is one entry per line::

    <smr_no> <TAG> field=value field=value ...

with a fixed field order per tag, decimal integers, 0/1 booleans and hex
digests. ``parse(dump(log))`` reproduces the log bit-exactly, and parsing
replays the same reference checks as live appends.
"""
from __future__ import annotations

from dataclasses import dataclass

from .hashing import digest

__all__ = [
    "ShardPointer",
    "AvailabilityVote",
    "CodingFraudProof",
    "StateCommitment",
    "Challenge",
    "ChallengeReply",
    "DisputedTx",
    "OrderedLog",
    "entry_line",
    "parse_line",
]


@dataclass(frozen=True)
class ShardPointer:
    shard: int
    digest: bytes  # chunk-commitment root of the coded block
    miner: int
    lottery: int  # hash value that won the mining lottery


@dataclass(frozen=True)
class AvailabilityVote:
    voter: int
    digest: bytes
    available: bool


@dataclass(frozen=True)
class CodingFraudProof:
    digest: bytes
    chunks: tuple  # ((x, (symbols...)), ...), the p decoding chunks
    mismatch: int


@dataclass(frozen=True)
class StateCommitment:
    shard: int
    epoch: int
    final_root: bytes
    intermediate_roots: tuple


@dataclass(frozen=True)
class Challenge:
    commitment_ref: bytes  # entry digest of the disputed StateCommitment
    index: int  # first boundary where the challenger's view diverges


@dataclass(frozen=True)
class ChallengeReply:
    commitment_ref: bytes
    roots: tuple  # claimed boundary roots for the current sub-segments


@dataclass(frozen=True)
class DisputedTx:
    sender: str
    receiver: str
    amount: int
    witness: tuple  # ((account, balance), ...) proving the pre-state


_TAGS = {
    ShardPointer: "PTR",
    AvailabilityVote: "VOTE",
    CodingFraudProof: "FRAUD",
    StateCommitment: "COMMIT",
    Challenge: "CHAL",
    ChallengeReply: "REPLY",
    DisputedTx: "DISPUTE",
}


def _hex(b: bytes) -> str:
    return b.hex()


def _chunks_str(chunks) -> str:
    return ";".join(f"{x}:" + "|".join(str(v) for v in vals) for x, vals in chunks)


def _parse_chunks(text: str) -> tuple:
    if not text:
        return ()
    out = []
    for part in text.split(";"):
        x, vals = part.split(":")
        out.append((int(x), tuple(int(v) for v in vals.split("|"))))
    return tuple(out)


def _roots_str(roots) -> str:
    return ",".join(r.hex() for r in roots)


def _parse_roots(text: str) -> tuple:
    if not text:
        return ()
    return tuple(bytes.fromhex(r) for r in text.split(","))


def entry_line(smr_no: int, entry) -> str:
    """Canonical single-line serialization, also the input to entry digests."""
    tag = _TAGS[type(entry)]
    if tag == "PTR":
        fields = (
            f"shard={entry.shard}",
            f"digest={_hex(entry.digest)}",
            f"miner={entry.miner}",
            f"lottery={entry.lottery:x}",
        )
    elif tag == "VOTE":
        fields = (
            f"voter={entry.voter}",
            f"digest={_hex(entry.digest)}",
            f"available={1 if entry.available else 0}",
        )
    elif tag == "FRAUD":
        fields = (
            f"digest={_hex(entry.digest)}",
            f"chunks={_chunks_str(entry.chunks)}",
            f"mismatch={entry.mismatch}",
        )
    elif tag == "COMMIT":
        fields = (
            f"shard={entry.shard}",
            f"epoch={entry.epoch}",
            f"final={_hex(entry.final_root)}",
            f"roots={_roots_str(entry.intermediate_roots)}",
        )
    elif tag == "CHAL":
        fields = (f"ref={_hex(entry.commitment_ref)}", f"index={entry.index}")
    elif tag == "REPLY":
        fields = (f"ref={_hex(entry.commitment_ref)}", f"roots={_roots_str(entry.roots)}")
    else:  # DISPUTE
        witness = ",".join(f"{a}:{b}" for a, b in entry.witness)
        fields = (
            f"sender={entry.sender}",
            f"receiver={entry.receiver}",
            f"amount={entry.amount}",
            f"witness={witness}",
        )
    return " ".join((str(smr_no), tag, *fields))


def parse_line(line: str):
    smr_text, tag, *field_texts = line.split(" ")
    fields = {}
    for ft in field_texts:
        key, _, value = ft.partition("=")
        fields[key] = value
    if tag == "PTR":
        entry = ShardPointer(
            shard=int(fields["shard"]),
            digest=bytes.fromhex(fields["digest"]),
            miner=int(fields["miner"]),
            lottery=int(fields["lottery"], 16),
        )
    elif tag == "VOTE":
        entry = AvailabilityVote(
            voter=int(fields["voter"]),
            digest=bytes.fromhex(fields["digest"]),
            available=fields["available"] == "1",
        )
    elif tag == "FRAUD":
        entry = CodingFraudProof(
            digest=bytes.fromhex(fields["digest"]),
            chunks=_parse_chunks(fields["chunks"]),
            mismatch=int(fields["mismatch"]),
        )
    elif tag == "COMMIT":
        entry = StateCommitment(
            shard=int(fields["shard"]),
            epoch=int(fields["epoch"]),
            final_root=bytes.fromhex(fields["final"]),
            intermediate_roots=_parse_roots(fields["roots"]),
        )
    elif tag == "CHAL":
        entry = Challenge(
            commitment_ref=bytes.fromhex(fields["ref"]), index=int(fields["index"])
        )
    elif tag == "REPLY":
        entry = ChallengeReply(
            commitment_ref=bytes.fromhex(fields["ref"]), roots=_parse_roots(fields["roots"])
        )
    elif tag == "DISPUTE":
        witness = tuple(
            (a, int(b))
            for a, b in (pair.split(":") for pair in fields["witness"].split(",") if pair)
        )
        entry = DisputedTx(
            sender=fields["sender"],
            receiver=fields["receiver"],
            amount=int(fields["amount"]),
            witness=witness,
        )
    else:
        raise ValueError(f"unknown log tag {tag!r}")
    return int(smr_text), entry


class OrderedLog:
    """Total order over log entries with reference validation on append."""

    def __init__(self):
        self.entries: list = []  # (smr_no, entry) in insertion order
        self._block_digests: set = set()
        self._commitment_digests: set = set()
        self._pointers: list = []
        self._votes: dict = {}  # block digest -> first vote per voter

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def append(self, smr_no: int, entry) -> bytes:
        """Validate references, append, and return the entry's digest."""
        if smr_no < 0:
            raise ValueError("smr_no must be nonnegative")
        if self.entries and smr_no < self.entries[-1][0]:
            raise ValueError("smr_no must be nondecreasing")
        if isinstance(entry, (AvailabilityVote, CodingFraudProof)):
            if entry.digest not in self._block_digests:
                raise ValueError("entry references an unknown block digest")
        elif isinstance(entry, (Challenge, ChallengeReply)):
            if entry.commitment_ref not in self._commitment_digests:
                raise ValueError("entry references an unknown commitment")
        elif type(entry) not in _TAGS:
            raise TypeError(f"not a log entry: {entry!r}")
        self.entries.append((smr_no, entry))
        ref = digest(entry_line(smr_no, entry))
        if isinstance(entry, ShardPointer):
            self._block_digests.add(entry.digest)
            self._pointers.append((smr_no, entry))
        elif isinstance(entry, StateCommitment):
            self._commitment_digests.add(ref)
        elif isinstance(entry, AvailabilityVote):
            bucket = self._votes.setdefault(entry.digest, {})
            bucket.setdefault(entry.voter, entry)
        return ref

    def dump(self) -> str:
        return "".join(entry_line(smr_no, e) + "\n" for smr_no, e in self.entries)

    @classmethod
    def parse(cls, text: str) -> "OrderedLog":
        log = cls()
        for line in text.splitlines():
            if line:
                smr_no, entry = parse_line(line)
                log.append(smr_no, entry)
        return log

    # query helpers used by ledger derivation and the world scheduler

    def shard_pointers(self, shard=None):
        """(smr_no, ShardPointer) pairs in log order, optionally one shard."""
        return [
            (smr_no, e)
            for smr_no, e in self._pointers
            if shard is None or e.shard == shard
        ]

    def votes_for(self, block_digest: bytes):
        """First vote per voter on the given block, in log order."""
        return list(self._votes.get(block_digest, {}).values())

    def fraud_proven(self) -> set:
        return {e.digest for _, e in self.entries if isinstance(e, CodingFraudProof)}
