"""Sequential evaluation with Merkle-committed checkpoints.

The chain starts at seed_state(pk, x, Com(w)) and runs T steps on one strand,
recording a checkpoint every ``interval`` steps and at T. The proof carries the
Merkle root over checkpoint leaves and openings of ``k`` Fiat-Shamir-chosen
segments, each of which a verifier can re-hash in at most ``interval`` steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .commitment import Commitment, Opening, SessionRNG, commit
from .errors import BadChallengeCount, BadInterval, IndexOutOfRange
from .hashing import TAG_SEED, TAG_STMT, tagged_hash, u32, u64
from .merkle import MerkleTree, PathNode, leaf_hash
from .randomness import fiat_shamir_indices
from .seq_hash import T_MAX, check_state, iterate
from .trusted_setup import KeyPair

DEFAULT_K = 20
PROOF_VERSION = 1


def checkpoint_count(T: int, interval: int) -> int:
    return -(-T // interval) + 1


def default_interval(T: int) -> int:
    return max(1, T // 1024)


def default_k(T: int, interval: int) -> int:
    return min(DEFAULT_K, checkpoint_count(T, interval) - 1)


def checkpoint_index(j: int, T: int, interval: int) -> int:
    return min(j * interval, T)


def seed_state(pk: bytes, x: bytes, cw: Commitment | bytes) -> bytes:
    digest = cw.digest if isinstance(cw, Commitment) else cw
    return tagged_hash(TAG_SEED, pk, x, digest)


def statement_digest(lam: int, pk: bytes, x: bytes, cw: bytes, T: int, interval: int, k: int) -> bytes:
    """Digest of every public parameter of a proof, mixed into the challenge derivation."""
    return tagged_hash(TAG_STMT, u32(lam), pk, x, cw, u64(T), u64(interval), u64(k))


@dataclass(frozen=True)
class Checkpoint:
    index: int
    state: bytes


@dataclass(frozen=True)
class CheckpointTrace:
    checkpoints: tuple[Checkpoint, ...]
    interval: int
    T: int
    witness_opening: Opening | None = field(default=None, compare=False)

    @property
    def m(self) -> int:
        return len(self.checkpoints)

    @property
    def y(self) -> bytes:
        return self.checkpoints[-1].state

    @cached_property
    def tree(self) -> MerkleTree:
        return MerkleTree([leaf_hash(cp.index, cp.state) for cp in self.checkpoints])


@dataclass(frozen=True)
class CheckpointOpening:
    index: int
    state: bytes
    path: tuple[PathNode, ...]


@dataclass(frozen=True)
class Challenge:
    segment: int
    start: CheckpointOpening
    end: CheckpointOpening


@dataclass(frozen=True)
class EvalProof:
    lam: int
    T: int
    interval: int
    k: int
    x: bytes
    y: bytes
    er: bytes
    cw: bytes
    challenges: tuple[Challenge, ...]
    version: int = PROOF_VERSION

    @property
    def m(self) -> int:
        return checkpoint_count(self.T, self.interval)


@dataclass(frozen=True)
class StateProof:
    step: int
    T: int
    interval: int
    checkpoint: CheckpointOpening
    offset: int
    state: bytes
    version: int = PROOF_VERSION


def check_params(T: int, interval: int, k: int) -> int:
    if not 1 <= T <= T_MAX:
        raise BadInterval(f"T must be in [1, 2^32], got {T}")
    if not 1 <= interval <= T:
        raise BadInterval(f"interval must be in [1, T], got {interval}")
    m = checkpoint_count(T, interval)
    if not 1 <= k <= m - 1:
        raise BadChallengeCount(f"k must be in [1, {m - 1}], got {k}")
    return m


def run_chain(seed: bytes, T: int, interval: int) -> tuple[Checkpoint, ...]:
    """T sequential steps from ``seed``, recording every ``interval``-th state and the last."""
    cps = [Checkpoint(0, seed)]
    s = seed
    done = 0
    while done < T:
        n = min(interval, T - done)
        s = iterate(s, n)
        done += n
        cps.append(Checkpoint(done, s))
    return tuple(cps)


def _opening(trace: CheckpointTrace, j: int) -> CheckpointOpening:
    cp = trace.checkpoints[j]
    return CheckpointOpening(cp.index, cp.state, tuple(trace.tree.open(j)))


def commit_trace(kp: KeyPair, x: bytes, cw: bytes, trace: CheckpointTrace, k: int) -> EvalProof:
    """Commit to a (possibly adversarial) trace and open the challenged segments."""
    er = trace.tree.root
    ctx = statement_digest(kp.lam, kp.pk, x, cw, trace.T, trace.interval, k)
    segs = fiat_shamir_indices(er, trace.y, k, trace.m - 1, ctx)
    challenges = tuple(Challenge(j, _opening(trace, j), _opening(trace, j + 1)) for j in segs)
    return EvalProof(kp.lam, trace.T, trace.interval, k, x, trace.y, er, cw, challenges)


def evaluate(
    kp: KeyPair,
    x: bytes,
    w: bytes,
    T: int,
    interval: int | None = None,
    k: int | None = None,
    rng_seed: bytes | None = None,
) -> tuple[EvalProof, CheckpointTrace]:
    x = check_state(x)
    if interval is None:
        interval = default_interval(max(T, 1))
    if k is None:
        k = default_k(T, interval) if 1 <= interval <= T else 0
    check_params(T, interval, k)

    rng = SessionRNG(rng_seed)
    opening = Opening(w, rng.randomness())
    cw = commit(opening.message, opening.randomness).digest
    cps = run_chain(seed_state(kp.pk, x, cw), T, interval)
    trace = CheckpointTrace(cps, interval, T, opening)
    return commit_trace(kp, x, cw, trace, k), trace


def prove_state(trace: CheckpointTrace, i: int) -> StateProof:
    """Open the checkpoint at or before step ``i`` and the state reached ``offset`` steps later."""
    if not 0 <= i <= trace.T:
        raise IndexOutOfRange(f"step {i} outside [0, {trace.T}]")
    j = trace.m - 1 if i == trace.T else i // trace.interval
    op = _opening(trace, j)
    d = i - op.index
    return StateProof(i, trace.T, trace.interval, op, d, iterate(op.state, d))
