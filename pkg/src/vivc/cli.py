"""vivc command line.

Exit codes: 0 success / accept, 1 reject, 2 usage, parse or IO error.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import formats
from .adversary import Strategy, forge_campaign, parallel_attack_sim
from .bench import sequentiality_bench
from .errors import MalformedProof, VIVCError
from .hashing import plain_hash
from .prover import checkpoint_count, default_interval, default_k, evaluate, prove_state
from .randomness import derive_delay, rand_gen
from .seq_hash import T_MAX
from .trusted_setup import LAMBDAS, CeremonyChain, ceremony_contribute, trusted_setup
from .verifier import verify, verify_checkpoint

EXIT_OK, EXIT_REJECT, EXIT_ERROR = 0, 1, 2


class ConfigError(Exception):
    def __init__(self, field: str, msg: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


class _Quiet:
    enabled = False


def say(*args) -> None:
    if not _Quiet.enabled:
        print(*args)


def parse_count(text: str) -> int:
    """Integer or ``b^e`` (e.g. ``2^14``)."""
    text = text.strip()
    if "^" in text:
        base, exp = (int(v) for v in text.split("^", 1))
        if not 0 <= exp <= 64:
            raise ValueError("exponent out of range")
        return base**exp
    return int(text)


def parse_counts(text: str) -> list[int]:
    return [parse_count(t) for t in text.split(",") if t.strip()]


def decode_seed(text: str) -> bytes:
    if text.startswith("0x"):
        try:
            return bytes.fromhex(text[2:])
        except ValueError:
            raise ConfigError("--seed", "invalid hex after 0x") from None
    return text.encode("utf-8")


def resolve_seed(args, required: bool = False) -> bytes | None:
    if getattr(args, "seed", None) is not None and getattr(args, "seed_file", None):
        raise ConfigError("--seed", "give either --seed or --seed-file, not both")
    if getattr(args, "seed", None) is not None:
        seed = decode_seed(args.seed)
    elif getattr(args, "seed_file", None):
        seed = Path(args.seed_file).read_bytes()
    elif os.environ.get("VIVC_SEED"):
        seed = decode_seed(os.environ["VIVC_SEED"])
    else:
        seed = None
    if seed is not None and not seed:
        raise ConfigError("--seed", "seed must be nonempty")
    if required and seed is None:
        raise ConfigError("--seed", "a seed is required (--seed, --seed-file or VIVC_SEED)")
    return seed


def shred(path: Path) -> None:
    size = path.stat().st_size
    with open(path, "r+b") as fh:
        fh.write(secrets.token_bytes(size))
        fh.flush()
        os.fsync(fh.fileno())
    path.unlink()


def _out(args, default: str) -> Path:
    return Path(args.out or default)


# commands

def cmd_setup(args) -> int:
    if args.shred_seed and (not args.seed_file or args.ceremony):
        raise ConfigError("--shred-seed", "requires --seed-file as the seed source")
    if args.ceremony:
        seed = formats.ceremony_from_dict(formats.read_json(args.ceremony)).srs
    else:
        seed = resolve_seed(args, required=True)
    if args.lam not in LAMBDAS:
        raise ConfigError("--lambda", f"must be one of {LAMBDAS}")
    kp = trusted_setup(args.lam, seed)
    del seed
    formats.write_json(_out(args, "keypair.json"), formats.keypair_to_dict(kp))
    if args.shred_seed:
        shred(Path(args.seed_file))
    say(f"binding {kp.binding.hex()}")
    return EXIT_OK


def cmd_contribute(args) -> int:
    path = Path(args.ceremony)
    chain = formats.ceremony_from_dict(formats.read_json(path)) if path.exists() else CeremonyChain()
    if args.entropy is not None:
        entropy = args.entropy.encode()
    elif args.entropy_file:
        entropy = Path(args.entropy_file).read_bytes()
    else:
        entropy = secrets.token_bytes(32)
    if not entropy:
        raise ConfigError("--entropy", "must be nonempty")
    chain = ceremony_contribute(chain, entropy)
    formats.write_json(_out(args, str(path)), formats.ceremony_to_dict(chain))
    say(f"srs {chain.srs.hex()}")
    return EXIT_OK


@dataclass
class EvalConfig:
    T: int
    interval: int
    k: int
    x: bytes
    witness: bytes
    seed: bytes | None


def eval_config(args) -> EvalConfig:
    seed = resolve_seed(args)
    if args.t is not None:
        if args.t_min is not None or args.t_max is not None:
            raise ConfigError("--t", "give either --t or --t-min/--t-max")
        T = args.t
    elif args.t_min is not None and args.t_max is not None:
        if not 1 <= args.t_min <= args.t_max <= T_MAX:
            raise ConfigError("--t-min/--t-max", "need 1 <= t-min <= t-max <= 2^32")
        if seed is None:
            raise ConfigError("--seed", "a seed is required to derive T from --t-min/--t-max")
        T = derive_delay(rand_gen(seed), args.t_min, args.t_max)
    else:
        raise ConfigError("--t", "give --t or both --t-min and --t-max")
    if not 1 <= T <= T_MAX:
        raise ConfigError("--t", f"must be in [1, 2^32], got {T}")
    c = args.interval if args.interval is not None else default_interval(T)
    if not 1 <= c <= T:
        raise ConfigError("--interval", f"must be in [1, T={T}], got {c}")
    m = checkpoint_count(T, c)
    k = args.k if args.k is not None else default_k(T, c)
    if not 1 <= k <= m - 1:
        raise ConfigError("--k", f"must be in [1, {m - 1}], got {k}")
    if args.x is not None:
        try:
            x = bytes.fromhex(args.x)
        except ValueError:
            raise ConfigError("--x", "must be hex") from None
        if len(x) != 32:
            raise ConfigError("--x", "must be 32 bytes (64 hex chars)")
    else:
        x = plain_hash(args.input.encode())
    if args.witness_file:
        w = Path(args.witness_file).read_bytes()
    else:
        w = args.witness.encode()
    return EvalConfig(T, c, k, x, w, seed)


def _evaluate(args):
    kp = formats.keypair_from_dict(formats.read_json(args.keypair))
    if not kp.binding_ok():
        raise ConfigError("--keypair", "keypair binding does not verify")
    cfg = eval_config(args)
    proof, trace = evaluate(kp, cfg.x, cfg.witness, cfg.T, cfg.interval, cfg.k, cfg.seed)
    formats.write_json(_out(args, "proof.json"), formats.proof_to_dict(proof))
    if args.trace_out:
        formats.write_json(args.trace_out, formats.trace_to_dict(trace))
    say(f"T  {proof.T}")
    say(f"y  {proof.y.hex()}")
    say(f"Er {proof.er.hex()}")
    return kp, proof


def cmd_eval(args) -> int:
    _evaluate(args)
    return EXIT_OK


def _report(verdict) -> int:
    if verdict.accepted:
        say(f"accept D={verdict.D:.6f}")
        return EXIT_OK
    say(f"reject {verdict.reason}")
    return EXIT_REJECT


def cmd_verify(args) -> int:
    kp = formats.keypair_from_dict(formats.read_json(args.keypair))
    proof = formats.proof_from_dict(formats.read_json(args.proof))
    if args.x is None:
        x = proof.x
    else:
        try:
            x = bytes.fromhex(args.x)
        except ValueError:
            raise ConfigError("--x", "must be hex") from None
    return _report(verify(kp, x, proof))


def cmd_roundtrip(args) -> int:
    kp, proof = _evaluate(args)
    return _report(verify(kp, proof.x, proof))


def cmd_checkpoint_prove(args) -> int:
    trace = formats.trace_from_dict(formats.read_json(args.trace))
    if not 0 <= args.step <= trace.T:
        raise ConfigError("--step", f"must be in [0, {trace.T}]")
    sp = prove_state(trace, args.step)
    formats.write_json(_out(args, "state_proof.json"), formats.state_proof_to_dict(sp))
    say(f"state {sp.state.hex()} (offset {sp.offset})")
    return EXIT_OK


def cmd_checkpoint_verify(args) -> int:
    kp = formats.keypair_from_dict(formats.read_json(args.keypair))
    proof = formats.proof_from_dict(formats.read_json(args.proof))
    sp = formats.state_proof_from_dict(formats.read_json(args.state_proof))
    if sp.T != proof.T or sp.interval != proof.interval:
        say("reject StatementMismatch")
        return EXIT_REJECT
    if verify_checkpoint(kp, proof.er, sp, proof.m):
        say(f"accept step {sp.step} state {sp.state.hex()}")
        return EXIT_OK
    say("reject CheckpointInvalid")
    return EXIT_REJECT


def cmd_bench(args) -> int:
    Ts = parse_counts(args.t)
    if not Ts or any(not 1 <= T <= 2**24 for T in Ts):
        raise ConfigError("--t", "need a comma list of delays in [1, 2^24]")
    Ts.sort()
    if args.interval in (None, "auto"):
        interval = None
    else:
        interval = parse_count(args.interval)
        if not 1 <= interval <= Ts[0]:
            raise ConfigError("--interval", "must be in [1, min T]")
    if args.k < 1 or args.repeats < 1:
        raise ConfigError("--k/--repeats", "must be >= 1")
    report = sequentiality_bench(Ts, interval, args.k, args.repeats)
    if args.out:
        formats.write_json(args.out, report.to_dict())
    say(report.table())
    return EXIT_OK


def _attack_material(args):
    if args.keypair and args.proof:
        kp = formats.keypair_from_dict(formats.read_json(args.keypair))
        proof = formats.proof_from_dict(formats.read_json(args.proof))
        return kp, proof
    kp = trusted_setup(128, b"vivc-attack")
    c = args.interval or default_interval(args.t)
    proof, _ = evaluate(kp, bytes(32), b"witness", args.t, c, min(args.k, checkpoint_count(args.t, c) - 1), b"attack")
    return kp, proof


def cmd_attack(args) -> int:
    if args.trials < 1:
        raise ConfigError("--trials", "must be >= 1")
    if not 1 <= args.t <= 2**20:
        raise ConfigError("--t", "must be in [1, 2^20]")
    if args.strategy == "parallel":
        if args.q < 1:
            raise ConfigError("--q", "must be >= 1")
        rep = parallel_attack_sim(args.t, args.q, args.trials, args.guesses, args.guess_bits, args.rng)
        result = asdict(rep)
        say(f"q={rep.q} success {rep.successes}/{rep.trials} rate={rep.success_rate:.5f} "
            f"exact={rep.exact_probability:.3e} bound={rep.union_bound:.3e} speedup={rep.effective_speedup:.3f}")
    else:
        if not 0 < args.delta <= 1:
            raise ConfigError("--delta", "must be in (0, 1]")
        kp, proof = _attack_material(args)
        rep = forge_campaign(kp, proof, args.strategy, args.trials, seed=args.rng or 0, delta=args.delta)
        result = asdict(rep)
        line = f"{rep.strategy}: {rep.accepts}/{rep.trials} accepted; reasons {json.dumps(rep.reasons, sort_keys=True)}"
        if rep.expected_detection is not None:
            line += (f"; detection {rep.detection_rate:.4f} expected {rep.expected_detection:.4f}"
                     f" +/- {3 * rep.sigma:.4f} (3 sigma)")
        say(line)
    if args.out:
        formats.write_json(args.out, {"version": 1, **result})
    return EXIT_OK


# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", help="UTF-8 seed, or hex with a 0x prefix (falls back to $VIVC_SEED)")
    common.add_argument("--seed-file", help="read seed bytes from a file")
    common.add_argument("--out", help="output path")
    common.add_argument("--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="vivc", description="hash-chain delay function with checkpoint proofs")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("setup", parents=[common], help="derive pk/vk from a setup seed")
    s.add_argument("--lambda", dest="lam", type=int, default=128)
    s.add_argument("--ceremony", help="use a ceremony's final srs as the seed")
    s.add_argument("--shred-seed", action="store_true", help="overwrite and delete --seed-file afterwards")
    s.set_defaults(func=cmd_setup)

    s = sub.add_parser("contribute", parents=[common], help="add a contribution to a ceremony file")
    s.add_argument("--ceremony", required=True)
    s.add_argument("--entropy")
    s.add_argument("--entropy-file")
    s.set_defaults(func=cmd_contribute)

    def eval_flags(s):
        s.add_argument("--keypair", required=True)
        s.add_argument("--t", type=parse_count)
        s.add_argument("--t-min", type=parse_count)
        s.add_argument("--t-max", type=parse_count)
        s.add_argument("--interval", type=parse_count)
        s.add_argument("--k", type=int)
        s.add_argument("--x", help="statement as 64 hex chars")
        s.add_argument("--input", default="", help="statement text, hashed to x when --x is absent")
        s.add_argument("--witness", default="")
        s.add_argument("--witness-file")
        s.add_argument("--trace-out")

    s = sub.add_parser("eval", parents=[common], help="run the delay and write a proof")
    eval_flags(s)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("roundtrip", parents=[common], help="eval then verify")
    eval_flags(s)
    s.set_defaults(func=cmd_roundtrip)

    s = sub.add_parser("verify", parents=[common], help="stateless proof verification")
    s.add_argument("--keypair", required=True)
    s.add_argument("--proof", required=True)
    s.add_argument("--x", help="expected statement; defaults to the proof's")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("checkpoint", help="prove or verify an intermediate state")
    csub = s.add_subparsers(dest="action", required=True)
    cp = csub.add_parser("prove", parents=[common])
    cp.add_argument("--trace", required=True)
    cp.add_argument("--step", type=parse_count, required=True)
    cp.set_defaults(func=cmd_checkpoint_prove)
    cv = csub.add_parser("verify", parents=[common])
    cv.add_argument("--keypair", required=True)
    cv.add_argument("--proof", required=True)
    cv.add_argument("--state-proof", required=True)
    cv.set_defaults(func=cmd_checkpoint_verify)

    s = sub.add_parser("bench", parents=[common], help="sequentiality benchmark")
    s.add_argument("--t", default="2^14,2^16,2^18")
    s.add_argument("--interval", default="auto")
    s.add_argument("--k", type=int, default=20)
    s.add_argument("--repeats", type=int, default=3)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("attack", parents=[common], help="forgery and parallel-shortcut simulations")
    s.add_argument("--strategy", required=True, choices=[x.value for x in Strategy] + ["parallel"])
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--delta", type=float, default=0.25)
    s.add_argument("--t", type=parse_count, default=2000)
    s.add_argument("--interval", type=parse_count)
    s.add_argument("--k", type=int, default=20)
    s.add_argument("--keypair")
    s.add_argument("--proof")
    s.add_argument("--q", type=int, default=8)
    s.add_argument("--guesses", type=int, default=1)
    s.add_argument("--guess-bits", type=int, default=256)
    s.add_argument("--rng", type=int, default=None, help="integer seed for the simulation RNG")
    s.set_defaults(func=cmd_attack)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    _Quiet.enabled = getattr(args, "quiet", False)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"vivc: error: {e}", file=sys.stderr)
    except MalformedProof as e:
        print(f"vivc: malformed input: {e}", file=sys.stderr)
    except (VIVCError, OSError) as e:
        print(f"vivc: error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
