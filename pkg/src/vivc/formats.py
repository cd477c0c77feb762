"""JSON artifacts: keypair, ceremony, proof, trace, state proof, transcript.

Writers emit a fixed field order and lowercase hex. Parsers are strict: exact
key sets, integer fields that really are integers, fixed-length lowercase hex,
and a known ``version``. Anything else raises MalformedProof.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .commitment import Commitment, Opening
from .errors import MalformedProof
from .merkle import LEFT, RIGHT, PathNode
from .prover import (
    PROOF_VERSION,
    Challenge,
    Checkpoint,
    CheckpointOpening,
    CheckpointTrace,
    EvalProof,
    StateProof,
    check_params,
    checkpoint_count,
    checkpoint_index,
)
from .trusted_setup import CeremonyChain, KeyPair, Round, SetupTranscript

VERSION = 1
_HEX32 = re.compile(r"[0-9a-f]{64}")
_HEX = re.compile(r"(?:[0-9a-f]{2})*")


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _reject_constant(name: str):
    raise MalformedProof(f"non-finite number {name}")


def _no_dupes(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise MalformedProof(f"duplicate key {k!r}")
        out[k] = v
    return out


def loads(text: str | bytes) -> Any:
    try:
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        return json.loads(text, object_pairs_hook=_no_dupes, parse_constant=_reject_constant)
    except MalformedProof:
        raise
    except (ValueError, RecursionError) as e:
        raise MalformedProof(f"not valid JSON: {e}") from None


def _obj(d: Any, keys: tuple[str, ...], what: str) -> dict:
    if not isinstance(d, dict):
        raise MalformedProof(f"{what} must be an object")
    if set(d) != set(keys):
        raise MalformedProof(f"{what} keys {sorted(d)} != {sorted(keys)}")
    return d


def _int(d: dict, key: str, lo: int = 0, hi: int | None = None) -> int:
    v = d[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedProof(f"{key} must be an integer")
    if v < lo or (hi is not None and v > hi):
        raise MalformedProof(f"{key}={v} out of range")
    return v


def _h32(d: dict, key: str) -> bytes:
    v = d[key]
    if not isinstance(v, str) or not _HEX32.fullmatch(v):
        raise MalformedProof(f"{key} must be 64 lowercase hex chars")
    return bytes.fromhex(v)


def _hex(d: dict, key: str) -> bytes:
    v = d[key]
    if not isinstance(v, str) or not _HEX.fullmatch(v):
        raise MalformedProof(f"{key} must be lowercase hex")
    return bytes.fromhex(v)


def _list(d: dict, key: str) -> list:
    v = d[key]
    if not isinstance(v, list):
        raise MalformedProof(f"{key} must be a list")
    return v


def _version(d: dict) -> None:
    if _int(d, "version") != VERSION:
        raise MalformedProof(f"unsupported version {d['version']}")


# keypair

def keypair_to_dict(kp: KeyPair) -> dict:
    return {
        "version": VERSION,
        "lambda": kp.lam,
        "pk_hex": kp.pk.hex(),
        "vk_hex": kp.vk.hex(),
        "binding_hex": kp.binding.hex(),
    }


def keypair_from_dict(d: Any) -> KeyPair:
    d = _obj(d, ("version", "lambda", "pk_hex", "vk_hex", "binding_hex"), "keypair")
    _version(d)
    return KeyPair(_int(d, "lambda"), _h32(d, "pk_hex"), _h32(d, "vk_hex"), _h32(d, "binding_hex"))


# ceremony

def ceremony_to_dict(ch: CeremonyChain) -> dict:
    return {
        "version": VERSION,
        "contributions": [c.hex() for c in ch.contributions],
        "srs_hex": ch.srs.hex(),
    }


def ceremony_from_dict(d: Any) -> CeremonyChain:
    d = _obj(d, ("version", "contributions", "srs_hex"), "ceremony")
    _version(d)
    contribs = []
    for c in _list(d, "contributions"):
        contribs.append(_h32({"contribution": c}, "contribution"))
    chain = CeremonyChain(tuple(contribs), _h32(d, "srs_hex"))
    if not chain.consistent():
        raise MalformedProof("ceremony srs does not match its contributions")
    return chain


# proof

def _opening_to_dict(op: CheckpointOpening) -> dict:
    return {
        "index": op.index,
        "state_hex": op.state.hex(),
        "path": [{"side": n.side, "sibling_hex": n.sibling.hex()} for n in op.path],
    }


def _opening_from_dict(d: Any) -> CheckpointOpening:
    d = _obj(d, ("index", "state_hex", "path"), "checkpoint opening")
    path = []
    for n in _list(d, "path"):
        n = _obj(n, ("side", "sibling_hex"), "path node")
        if n["side"] not in (LEFT, RIGHT):
            raise MalformedProof("path side must be 'L' or 'R'")
        path.append(PathNode(n["side"], _h32(n, "sibling_hex")))
    return CheckpointOpening(_int(d, "index"), _h32(d, "state_hex"), tuple(path))


def proof_to_dict(p: EvalProof) -> dict:
    return {
        "version": p.version,
        "lambda": p.lam,
        "T": p.T,
        "interval": p.interval,
        "k": p.k,
        "x_hex": p.x.hex(),
        "y_hex": p.y.hex(),
        "er_hex": p.er.hex(),
        "cw_hex": p.cw.hex(),
        "challenges": [
            {"segment": ch.segment, "start": _opening_to_dict(ch.start), "end": _opening_to_dict(ch.end)}
            for ch in p.challenges
        ],
    }


_PROOF_KEYS = ("version", "lambda", "T", "interval", "k", "x_hex", "y_hex", "er_hex", "cw_hex", "challenges")


def proof_from_dict(d: Any) -> EvalProof:
    d = _obj(d, _PROOF_KEYS, "proof")
    _version(d)
    T, c, k = _int(d, "T"), _int(d, "interval"), _int(d, "k")
    try:
        check_params(T, c, k)
    except ValueError as e:
        raise MalformedProof(str(e)) from None
    raw = _list(d, "challenges")
    if len(raw) != k:
        raise MalformedProof(f"{len(raw)} challenges for k={k}")
    challenges = []
    for ch in raw:
        ch = _obj(ch, ("segment", "start", "end"), "challenge")
        challenges.append(
            Challenge(_int(ch, "segment"), _opening_from_dict(ch["start"]), _opening_from_dict(ch["end"]))
        )
    return EvalProof(
        lam=_int(d, "lambda"),
        T=T,
        interval=c,
        k=k,
        x=_h32(d, "x_hex"),
        y=_h32(d, "y_hex"),
        er=_h32(d, "er_hex"),
        cw=_h32(d, "cw_hex"),
        challenges=tuple(challenges),
        version=PROOF_VERSION,
    )


# state proof

def state_proof_to_dict(sp: StateProof) -> dict:
    return {
        "version": sp.version,
        "step": sp.step,
        "T": sp.T,
        "interval": sp.interval,
        "checkpoint": _opening_to_dict(sp.checkpoint),
        "offset": sp.offset,
        "state_hex": sp.state.hex(),
    }


def state_proof_from_dict(d: Any) -> StateProof:
    d = _obj(d, ("version", "step", "T", "interval", "checkpoint", "offset", "state_hex"), "state proof")
    _version(d)
    return StateProof(
        step=_int(d, "step"),
        T=_int(d, "T", 1),
        interval=_int(d, "interval", 1),
        checkpoint=_opening_from_dict(d["checkpoint"]),
        offset=_int(d, "offset"),
        state=_h32(d, "state_hex"),
    )


# trace (prover side)

def trace_to_dict(tr: CheckpointTrace) -> dict:
    return {
        "version": VERSION,
        "T": tr.T,
        "interval": tr.interval,
        "checkpoints": [{"index": cp.index, "state_hex": cp.state.hex()} for cp in tr.checkpoints],
    }


def trace_from_dict(d: Any) -> CheckpointTrace:
    d = _obj(d, ("version", "T", "interval", "checkpoints"), "trace")
    _version(d)
    T, c = _int(d, "T", 1), _int(d, "interval", 1)
    if c > T:
        raise MalformedProof("interval exceeds T")
    cps = []
    for cp in _list(d, "checkpoints"):
        cp = _obj(cp, ("index", "state_hex"), "checkpoint")
        cps.append(Checkpoint(_int(cp, "index"), _h32(cp, "state_hex")))
    if len(cps) != checkpoint_count(T, c):
        raise MalformedProof("checkpoint count does not match T and interval")
    if any(cp.index != checkpoint_index(j, T, c) for j, cp in enumerate(cps)):
        raise MalformedProof("checkpoint indices out of order")
    return CheckpointTrace(tuple(cps), c, T)


# transcript

def transcript_to_dict(tr: SetupTranscript) -> dict:
    return {
        "version": VERSION,
        "alpha0": tr.alpha0,
        "final_bit": tr.final_bit,
        "rounds": [
            {
                "alpha": r.alpha,
                "commitment_hex": r.commitment.hex(),
                "opening": {"message_hex": r.opening.message.hex(), "randomness_hex": r.opening.randomness.hex()},
                "verifier_bit": r.verifier_bit,
            }
            for r in tr.rounds
        ],
    }


def transcript_from_dict(d: Any) -> SetupTranscript:
    d = _obj(d, ("version", "alpha0", "final_bit", "rounds"), "transcript")
    _version(d)
    rounds = []
    for r in _list(d, "rounds"):
        r = _obj(r, ("alpha", "commitment_hex", "opening", "verifier_bit"), "round")
        o = _obj(r["opening"], ("message_hex", "randomness_hex"), "opening")
        rounds.append(
            Round(
                _int(r, "alpha", 1),
                Commitment(_h32(r, "commitment_hex")),
                Opening(_hex(o, "message_hex"), _h32(o, "randomness_hex")),
                _int(r, "verifier_bit", 0, 1),
            )
        )
    return SetupTranscript(tuple(rounds), _int(d, "final_bit", 0, 1), _int(d, "alpha0", 1))


# file helpers

def read_json(path: str | Path) -> Any:
    return loads(Path(path).read_bytes())


def write_json(path: str | Path, obj: dict) -> None:
    Path(path).write_text(dumps(obj))
