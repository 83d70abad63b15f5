"""Protocol machinery: ordered log, sortition, coded availability,
shard ledgers, state commitments with bisection disputes, and the
world simulator that drives them together."""

from .availability import (
    availability_soundness_oracle,
    num_adversarial,
    required_data_chunks,
    tally_availability,
)
from .bisection import (
    BisectionResult,
    BisectionRound,
    NoDisputeError,
    PrefixExecutor,
    WitnessError,
    adjudicate,
    build_dispute,
    run_bisection,
)
from .coding import (
    CodedBlock,
    CodingFraud,
    InsufficientChunks,
    PRIME,
    bytes_to_symbols,
    chunk_bytes,
    decode_block,
    decode_or_fraud,
    decode_stripe,
    encode_block,
    encode_stripe,
    symbols_to_bytes,
)
from .hashing import HASH_SPACE, InjectedOracle, Sha256Oracle, digest, encode_parts
from .log import (
    AvailabilityVote,
    Challenge,
    ChallengeReply,
    CodingFraudProof,
    DisputedTx,
    OrderedLog,
    ShardPointer,
    StateCommitment,
    entry_line,
    parse_line,
)
from .merkle import MerkleTree, merkle_proof, merkle_root, verify_proof
from .sortition import assign_chunk, elect_epoch_leader, mining_lottery
from .state import Payment, ToyState, derive_shard_ledger, sanitize_and_execute
from .world import Scenario, WorldResult, parse_payments, run_world, serialize_payments

__all__ = [
    "availability_soundness_oracle",
    "num_adversarial",
    "required_data_chunks",
    "tally_availability",
    "BisectionResult",
    "BisectionRound",
    "NoDisputeError",
    "PrefixExecutor",
    "WitnessError",
    "adjudicate",
    "build_dispute",
    "run_bisection",
    "CodedBlock",
    "CodingFraud",
    "InsufficientChunks",
    "PRIME",
    "bytes_to_symbols",
    "chunk_bytes",
    "decode_block",
    "decode_or_fraud",
    "decode_stripe",
    "encode_block",
    "encode_stripe",
    "symbols_to_bytes",
    "HASH_SPACE",
    "InjectedOracle",
    "Sha256Oracle",
    "digest",
    "encode_parts",
    "AvailabilityVote",
    "Challenge",
    "ChallengeReply",
    "CodingFraudProof",
    "DisputedTx",
    "OrderedLog",
    "ShardPointer",
    "StateCommitment",
    "entry_line",
    "parse_line",
    "MerkleTree",
    "merkle_proof",
    "merkle_root",
    "verify_proof",
    "Payment",
    "ToyState",
    "derive_shard_ledger",
    "sanitize_and_execute",
    "Scenario",
    "WorldResult",
    "parse_payments",
    "run_world",
    "serialize_payments",
]
