"""Lock-step world simulation of the sharded architecture.

Each SMR block: nodes enter the mining lottery for their current shard,
winners build payment blocks, blocks are erasure coded and their pointers
posted to the ordered log, every node votes on availability of its assigned
chunk, and an honest observer decodes certified blocks and posts fraud
proofs against bad encodings. At epoch boundaries each shard's leader posts
a state commitment; a dishonest commitment draws a challenger into the
bisection game and the isolated transaction is adjudicated on the log.

Fault injection covers chunk withholding, miscoding, bad state commitments
and vote censorship. Resource costs are metered from the point of view of
node 0 (always honest: adversarial ids are the top ones).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..resources import ResourceMeter
from .availability import num_adversarial, required_data_chunks, tally_availability
from .bisection import PrefixExecutor, adjudicate, build_dispute, run_bisection
from .coding import (
    CodedBlock,
    CodingFraud,
    PRIME,
    bytes_to_symbols,
    chunk_bytes,
    decode_or_fraud,
    encode_block,
    serialize_chunk,
)
from .hashing import Sha256Oracle
from .log import (
    AvailabilityVote,
    Challenge,
    ChallengeReply,
    CodingFraudProof,
    OrderedLog,
    ShardPointer,
    StateCommitment,
    entry_line,
)
from .merkle import MerkleTree
from .sortition import mining_lottery
from .state import Payment, ToyState, derive_shard_ledger

__all__ = ["Scenario", "WorldResult", "run_world", "serialize_payments", "parse_payments"]

ACCOUNTS_PER_SHARD = 6
STARTING_BALANCE = 50


@dataclass
class Scenario:
    """Config for one world run. Fault lists hold (smr_no, shard) pairs,
    bad_commitment holds (epoch, shard); faults fire only when the slot is
    held by an adversarial node."""

    num_nodes: int
    num_shards: int
    beta: float
    smr_blocks: int
    kappa: int = 1
    epoch_length: int = 4
    branching: int = 10
    txs_per_block: int = 6
    seed: int = 0
    rotation_period: int = 0
    withhold: tuple = ()
    miscode: tuple = ()
    bad_commitment: tuple = ()
    censor_shard: int = None

    def __post_init__(self):
        if self.num_nodes < 2:
            raise ValueError("need at least two nodes")
        if self.num_shards < 1:
            raise ValueError("need at least one shard")
        if not 0 <= self.beta < 0.5:
            raise ValueError("beta must lie in [0, 0.5)")
        if self.smr_blocks < 1:
            raise ValueError("need at least one SMR block")
        if self.epoch_length < 1 or self.branching < 2:
            raise ValueError("bad epoch length or branching factor")
        if self.txs_per_block < 1:
            raise ValueError("need at least one transaction per block")
        if self.kappa < 1:
            raise ValueError("kappa must be at least 1")
        self.withhold = tuple((int(a), int(b)) for a, b in self.withhold)
        self.miscode = tuple((int(a), int(b)) for a, b in self.miscode)
        self.bad_commitment = tuple((int(a), int(b)) for a, b in self.bad_commitment)


@dataclass
class WorldResult:
    scenario: Scenario
    log: OrderedLog
    meter: ResourceMeter
    blocks: dict  # digest -> CodedBlock
    certified: set
    fraud_proven: set
    pending: set  # posted but never certified
    shard_states: dict  # shard -> ToyState after honest execution
    commitments: list = field(default_factory=list)  # (epoch, shard, verdict)
    disputes: list = field(default_factory=list)  # (epoch, shard, index, winner)

    def ledger(self, shard: int) -> list:
        return derive_shard_ledger(self.log, shard, self.scenario.num_nodes)


def serialize_payments(payments) -> bytes:
    return ";".join(f"{p.sender}>{p.receiver}:{p.amount}" for p in payments).encode()


def parse_payments(data: bytes):
    out = []
    for item in data.decode().split(";"):
        if not item:
            continue
        sender, rest = item.split(">")
        receiver, amount = rest.split(":")
        out.append(Payment(sender, receiver, int(amount)))
    return tuple(out)


def _genesis(shard: int) -> ToyState:
    return ToyState(
        {f"s{shard}n{i}": STARTING_BALANCE for i in range(ACCOUNTS_PER_SHARD)}
    )


def _state_bytes(state: ToyState) -> int:
    return sum(len(f"{a}={b}") + 1 for a, b in state.items())


class _World:
    def __init__(self, scenario: Scenario):
        self.sc = scenario
        self.rng = random.Random(scenario.seed)
        self.oracle = Sha256Oracle()
        self.log = OrderedLog()
        self.meter = ResourceMeter()
        self.adversarial = set(
            range(
                scenario.num_nodes - num_adversarial(scenario.beta, scenario.num_nodes),
                scenario.num_nodes,
            )
        )
        self.data_chunks = required_data_chunks(scenario.beta, scenario.num_nodes)
        self.blocks = {}
        self.payloads = {}
        self.certified = set()
        self.pending = set()
        self.commitments = []
        self.disputes = []
        self.shard_states = {k: _genesis(k) for k in range(scenario.num_shards)}
        self.committed_blocks = {k: 0 for k in range(scenario.num_shards)}
        self.proof_len = 33 * max(0, (scenario.num_nodes - 1).bit_length())

    def shard_of(self, node: int, smr_no: int) -> int:
        offset = smr_no // self.sc.rotation_period if self.sc.rotation_period else 0
        return (node + offset) % self.sc.num_shards

    def post(self, smr_no: int, entry, category: str) -> bytes:
        ref = self.log.append(smr_no, entry)
        self.meter.record_all_dimensions(
            category, len(entry_line(smr_no, entry).encode()) + 1
        )
        return ref

    def make_payments(self, shard: int):
        accounts = [f"s{shard}n{i}" for i in range(ACCOUNTS_PER_SHARD)]
        payments = []
        for _ in range(self.sc.txs_per_block):
            sender, receiver = self.rng.sample(accounts, 2)
            payments.append(Payment(sender, receiver, self.rng.randint(1, 5)))
        return tuple(payments)

    def build_block(self, smr_no: int, shard: int, miner: int) -> CodedBlock:
        payments = self.make_payments(shard)
        symbols = bytes_to_symbols(serialize_payments(payments))
        block = encode_block(shard, symbols, self.data_chunks, self.sc.num_nodes)
        if miner in self.adversarial and (smr_no, shard) in self.sc.miscode:
            # corrupt one parity chunk, then recommit so the proofs still verify
            chunks = list(block.chunks)
            target = self.data_chunks % block.num_chunks
            bad = list(chunks[target])
            bad[0] = (bad[0] + 1) % PRIME
            chunks[target] = tuple(bad)
            block.chunks = chunks
            block.root = MerkleTree(
                [serialize_chunk(i, c) for i, c in enumerate(chunks)]
            ).root
        block.transactions = payments
        self.payloads[block.root] = payments
        return block

    def run(self) -> WorldResult:
        for smr_no in range(self.sc.smr_blocks):
            self.mine_and_vote(smr_no)
            if self.sc.rotation_period and smr_no and smr_no % self.sc.rotation_period == 0:
                new_shard = self.shard_of(0, smr_no)
                if new_shard != self.shard_of(0, smr_no - 1):
                    self.meter.record_all_dimensions(
                        "rotation_sync", _state_bytes(self.shard_states[new_shard])
                    )
            if (smr_no + 1) % self.sc.epoch_length == 0:
                self.commit_epoch(smr_no, smr_no // self.sc.epoch_length)
        return WorldResult(
            scenario=self.sc,
            log=self.log,
            meter=self.meter,
            blocks=self.blocks,
            certified=self.certified,
            fraud_proven=self.log.fraud_proven(),
            pending=self.pending,
            shard_states=self.shard_states,
            commitments=self.commitments,
            disputes=self.disputes,
        )

    def mine_and_vote(self, smr_no: int) -> None:
        sc = self.sc
        candidates = [
            (node, f"pk{node}", self.shard_of(node, smr_no))
            for node in range(sc.num_nodes)
        ]
        winners = mining_lottery(candidates, smr_no, sc.kappa, self.oracle)
        posted = []
        for shard in sorted(winners):
            for miner, value in winners[shard]:
                block = self.build_block(smr_no, shard, miner)
                self.blocks[block.root] = block
                self.post(
                    smr_no,
                    ShardPointer(shard=shard, digest=block.root, miner=miner, lottery=value),
                    "shard_pointers",
                )
                posted.append((shard, miner, block))

        own_shard = self.shard_of(0, smr_no)
        for shard, miner, block in posted:
            withheld = miner in self.adversarial and (smr_no, shard) in sc.withhold
            votes = []
            for node in range(sc.num_nodes):
                if node in self.adversarial:
                    available = shard != sc.censor_shard
                else:
                    available = not withheld
                votes.append(
                    AvailabilityVote(voter=node, digest=block.root, available=available)
                )
                self.post(smr_no, votes[-1], "availability_votes")
            if not withheld:
                # node 0 fetches and verifies its assigned chunk for every block
                for dimension in ("communication", "computation"):
                    self.meter.record(
                        "chunk_traffic", dimension, chunk_bytes(block) + self.proof_len
                    )
            if not tally_availability(votes, sc.num_nodes):
                self.pending.add(block.root)
                continue
            self.certified.add(block.root)
            self.audit_block(smr_no, block)
            if shard == own_shard:
                payload = 2 * block.stripes * block.data_symbols
                for dimension in ("communication", "computation", "storage"):
                    self.meter.record("shard_processing", dimension, payload)

    def audit_block(self, smr_no: int, block: CodedBlock) -> None:
        """An honest observer decodes a certified block and reports fraud."""
        tree = MerkleTree([serialize_chunk(i, c) for i, c in enumerate(block.chunks)])
        proven = {
            i: (block.chunks[i], tree.proof(i)) for i in range(block.data_symbols)
        }
        outcome = decode_or_fraud(proven, block)
        if isinstance(outcome, CodingFraud):
            self.post(
                smr_no,
                CodingFraudProof(
                    digest=block.root,
                    chunks=tuple(sorted(outcome.decoding_chunks.items())),
                    mismatch=outcome.mismatch_index,
                ),
                "fraud_proofs",
            )

    def commit_epoch(self, smr_no: int, epoch: int) -> None:
        sc = self.sc
        for shard in range(sc.num_shards):
            members = [
                n for n in range(sc.num_nodes) if self.shard_of(n, smr_no) == shard
            ]
            if not members:
                continue
            ledger = derive_shard_ledger(self.log, shard, sc.num_nodes)
            fresh = ledger[self.committed_blocks[shard]:]
            self.committed_blocks[shard] = len(ledger)
            txs = [tx for digest in fresh for tx in self.payloads[digest]]
            pre_state = self.shard_states[shard]
            honest = PrefixExecutor(pre_state, txs)

            leader = None
            if (epoch, shard) in sc.bad_commitment and txs:
                bad_members = [n for n in members if n in self.adversarial]
                leader = bad_members[0] if bad_members else None
            if leader is not None:
                executor = PrefixExecutor(
                    pre_state, txs, fault_index=self.rng.randrange(len(txs))
                )
            else:
                leader = min(
                    members, key=lambda n: self.oracle.value(f"sk{n}", smr_no, shard)
                )
                executor = honest

            ref = self.post(
                smr_no,
                StateCommitment(
                    shard=shard,
                    epoch=epoch,
                    final_root=executor.root(len(txs)),
                    intermediate_roots=_first_split_roots(executor, sc.branching),
                ),
                "state_commitments",
            )

            verdict = "accepted"
            if executor.root(len(txs)) != honest.root(len(txs)):
                result = run_bisection(executor, honest, sc.branching)
                for rnd in result.transcript:
                    self.post(
                        smr_no,
                        ChallengeReply(commitment_ref=ref, roots=rnd.claimed_roots),
                        "challenge_interactions",
                    )
                    self.post(
                        smr_no,
                        Challenge(commitment_ref=ref, index=rnd.disagreement),
                        "challenge_interactions",
                    )
                dispute = build_dispute(honest, result.index)
                self.post(smr_no, dispute, "challenge_interactions")
                winner = adjudicate(
                    dispute,
                    honest.root(result.index),
                    executor.root(result.index + 1),
                )
                verdict = "rejected" if winner == "challenger" else "accepted"
                self.disputes.append((epoch, shard, result.index, winner))
            self.commitments.append((epoch, shard, verdict))
            # honest nodes advance the shard state by their own execution
            self.shard_states[shard] = honest.state(len(txs))


def _first_split_roots(executor, branching: int) -> tuple:
    """The sub-segment boundary roots a commitment carries up front; they
    match the first reply of a bisection game over the same range."""
    total = executor.length
    if total == 0:
        return ()
    virtual = 1
    while virtual < total:
        virtual *= branching
    step = max(1, virtual // branching)
    return tuple(executor.root(min(j * step, total)) for j in range(1, branching + 1))


def run_world(scenario: Scenario) -> WorldResult:
    """Run the scenario to completion and return the world's final record."""
    return _World(scenario).run()
