"""Spot-check verification of evaluation proofs and checkpoint state proofs.

Verify is stateless: every input is public (keypair, statement x, proof) and
repeated calls agree. The first failing check, in canonical segment order,
names the rejection reason.
"""

from __future__ import annotations

import enum
import hmac
import math
from dataclasses import dataclass

from .hashing import DIGEST_SIZE
from .merkle import PathNode, leaf_hash, merkle_verify, node_hash
from .prover import (
    PROOF_VERSION,
    CheckpointOpening,
    EvalProof,
    StateProof,
    checkpoint_count,
    checkpoint_index,
    seed_state,
    statement_digest,
)
from .randomness import fiat_shamir_indices
from .seq_hash import T_MAX, iterate
from .trusted_setup import KeyPair


class Reason(str, enum.Enum):
    BINDING_INVALID = "BindingInvalid"
    STATEMENT_MISMATCH = "StatementMismatch"
    CHALLENGE_MISMATCH = "ChallengeMismatch"
    PATH_INVALID = "PathInvalid"
    SEED_MISMATCH = "SeedMismatch"
    SEGMENT_MISMATCH = "SegmentMismatch"
    FINAL_STATE_MISMATCH = "FinalStateMismatch"
    MALFORMED_PROOF = "MalformedProof"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    D: float | None = None
    reason: Reason | None = None

    @classmethod
    def reject(cls, reason: Reason) -> "Verdict":
        return cls(False, None, reason)

    def __bool__(self) -> bool:
        return self.accepted


def entropy_D(y: bytes) -> float:
    """Binary Shannon entropy of the bit distribution of ``y``."""
    n = 8 * len(y)
    p = int.from_bytes(y, "big").bit_count() / n
    return sum(-q * math.log2(q) for q in (p, 1 - p) if q > 0)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_digest(v) -> bool:
    return isinstance(v, bytes) and len(v) == DIGEST_SIZE


def _well_formed_opening(op) -> bool:
    return (
        isinstance(op, CheckpointOpening)
        and _is_int(op.index)
        and _is_digest(op.state)
        and isinstance(op.path, tuple)
        and all(isinstance(n, PathNode) and isinstance(n.side, str) and _is_digest(n.sibling) for n in op.path)
    )


def well_formed(proof) -> bool:
    if not isinstance(proof, EvalProof):
        return False
    p = proof
    if p.version != PROOF_VERSION or not all(_is_int(v) for v in (p.lam, p.T, p.interval, p.k)):
        return False
    if not 1 <= p.T <= T_MAX or not 1 <= p.interval <= p.T:
        return False
    if not 1 <= p.k <= checkpoint_count(p.T, p.interval) - 1:
        return False
    if not all(_is_digest(b) for b in (p.x, p.y, p.er, p.cw)):
        return False
    if not isinstance(p.challenges, tuple) or len(p.challenges) != p.k:
        return False
    for ch in p.challenges:
        if not _is_int(getattr(ch, "segment", None)):
            return False
        if not _well_formed_opening(ch.start) or not _well_formed_opening(ch.end):
            return False
    return True


class _Memo:
    """Per-call memo so shared Merkle ancestors and repeated leaves hash once."""

    def __init__(self):
        self.nodes: dict[bytes, bytes] = {}
        self.leaves: dict[tuple[int, bytes], bytes] = {}

    def node(self, left: bytes, right: bytes) -> bytes:
        key = left + right
        h = self.nodes.get(key)
        if h is None:
            h = self.nodes[key] = node_hash(left, right)
        return h

    def leaf(self, index: int, state: bytes) -> bytes:
        h = self.leaves.get((index, state))
        if h is None:
            h = self.leaves[(index, state)] = leaf_hash(index, state)
        return h


def verify(kp: KeyPair, x: bytes, proof: EvalProof) -> Verdict:
    if not isinstance(kp, KeyPair) or not kp.binding_ok():
        return Verdict.reject(Reason.BINDING_INVALID)
    if not well_formed(proof):
        return Verdict.reject(Reason.MALFORMED_PROOF)
    if proof.lam != kp.lam or not hmac.compare_digest(proof.x, x):
        return Verdict.reject(Reason.STATEMENT_MISMATCH)

    T, c, m = proof.T, proof.interval, proof.m
    ctx = statement_digest(proof.lam, kp.pk, proof.x, proof.cw, T, c, proof.k)
    expected = fiat_shamir_indices(proof.er, proof.y, proof.k, m - 1, ctx)
    if [ch.segment for ch in proof.challenges] != expected:
        return Verdict.reject(Reason.CHALLENGE_MISMATCH)

    memo = _Memo()
    for ch in proof.challenges:
        j = ch.segment
        start, end = ch.start, ch.end
        if start.index != checkpoint_index(j, T, c) or end.index != checkpoint_index(j + 1, T, c):
            return Verdict.reject(Reason.PATH_INVALID)
        for pos, op in ((j, start), (j + 1, end)):
            if not merkle_verify(proof.er, memo.leaf(op.index, op.state), op.path, pos, m, memo.node):
                return Verdict.reject(Reason.PATH_INVALID)
        if j == 0 and start.state != seed_state(kp.pk, proof.x, proof.cw):
            return Verdict.reject(Reason.SEED_MISMATCH)
        if iterate(start.state, end.index - start.index) != end.state:
            return Verdict.reject(Reason.SEGMENT_MISMATCH)
        if j == m - 2 and end.state != proof.y:
            return Verdict.reject(Reason.FINAL_STATE_MISMATCH)
    return Verdict(True, entropy_D(proof.y))


def verify_checkpoint(kp: KeyPair, er: bytes, sp: StateProof, m: int) -> bool:
    """Check that ``sp.state`` is the chain state at step ``sp.step`` under root ``er``.

    Costs one binding hash, one leaf hash, ceil(log2 m) node hashes and
    ``sp.offset`` step hashes.
    """
    if not isinstance(kp, KeyPair) or not isinstance(sp, StateProof) or not _is_digest(er):
        return False
    if not all(_is_int(v) for v in (sp.step, sp.T, sp.interval, sp.offset, m)):
        return False
    if not (1 <= sp.T <= T_MAX and 1 <= sp.interval <= sp.T and 0 <= sp.step <= sp.T):
        return False
    if m != checkpoint_count(sp.T, sp.interval) or not _well_formed_opening(sp.checkpoint):
        return False
    if not _is_digest(sp.state):
        return False
    if sp.step == sp.T:
        j = m - 1
    else:
        j = sp.step // sp.interval
    op = sp.checkpoint
    if op.index != checkpoint_index(j, sp.T, sp.interval) or sp.offset != sp.step - op.index:
        return False
    if not kp.binding_ok():
        return False
    if not merkle_verify(er, leaf_hash(op.index, op.state), op.path, j, m):
        return False
    return iterate(op.state, sp.offset) == sp.state
