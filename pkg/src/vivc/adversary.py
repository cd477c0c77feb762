"""Adversaries against the hash-chain delay function.

* grouped exponentiation g^t * g^(t^2) * ... * g^(t^q) in a small modulus of
  unknown order, next to the literal g^(t^(q(q+1)/2)) exponent, so the two
  readings can be compared;
* a q-worker shortcut attack that guesses intermediate chain states;
* forgeries against honest proofs (bit flips, wrong y, replayed challenges,
  and a cheating prover that skips work on a fraction of segments).

Everything here works from published material only: the keypair, the proof,
and the group modulus. Group factorizations live in the tests.
"""

from __future__ import annotations

import enum
import math
import random
import time
from dataclasses import dataclass, replace

from .errors import BadGenerator, MalformedProof
from .formats import dumps, loads, proof_from_dict, proof_to_dict
from .prover import (
    Checkpoint,
    CheckpointTrace,
    EvalProof,
    commit_trace,
    seed_state,
)
from .seq_hash import iterate, truncated_step
from .trusted_setup import KeyPair
from .verifier import Reason, Verdict, verify


# grouped exponentiation

@dataclass(frozen=True)
class GroupParams:
    modulus: int
    generators: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 6:
            raise BadGenerator("modulus too small")
        for g in self.generators:
            if not 2 <= g <= self.modulus - 1 or math.gcd(g, self.modulus) != 1:
                raise BadGenerator(f"generator {g} is not a unit mod {self.modulus}")


def exponent_sum(t: int, q: int) -> int:
    """Exponent of prod_{i=1..q} g^(t^i) under group multiplication."""
    if t < 1 or q < 1:
        raise ValueError("t and q must be >= 1")
    return sum(t**i for i in range(1, q + 1))


def literal_exponent(t: int, q: int) -> int:
    """The t^(q(q+1)/2) exponent as written in the grouped formula."""
    if t < 1 or q < 1:
        raise ValueError("t and q must be >= 1")
    return t ** (q * (q + 1) // 2)


def eval_group_product(G: GroupParams, gen_index: int, t: int, q: int) -> int:
    """prod_{i=1..q} g^(t^i) mod N as q independent exponentiations."""
    if not 0 <= gen_index < len(G.generators):
        raise BadGenerator(f"no generator at index {gen_index}")
    if t < 1 or q < 1:
        raise ValueError("t and q must be >= 1")
    g, N = G.generators[gen_index], G.modulus
    acc = 1
    for factor in (pow(g, t**i, N) for i in range(1, q + 1)):
        acc = acc * factor % N
    return acc


@dataclass(frozen=True)
class ReadingsRow:
    t: int
    q: int
    exponent_sum: int
    literal_exponent: int
    product: int
    literal_value: int

    @property
    def readings_agree(self) -> bool:
        return self.product == self.literal_value


def compare_readings(G: GroupParams, gen_index: int, t: int, q: int) -> ReadingsRow:
    g, N = G.generators[gen_index], G.modulus
    lit = literal_exponent(t, q)
    return ReadingsRow(t, q, exponent_sum(t, q), lit, eval_group_product(G, gen_index, t, q), pow(g, lit, N))


# parallel shortcut attack

@dataclass(frozen=True)
class SpeedupReport:
    T: int
    q: int
    trials: int
    guess_bits: int
    guesses: int
    successes: int
    success_rate: float
    exact_probability: float
    union_bound: float
    sigma: float
    segment_steps: int
    adversary_steps: float
    effective_speedup: float
    honest_seconds: float


def parallel_attack_sim(
    T: int,
    q: int,
    trials: int,
    guesses: int = 1,
    guess_bits: int = 256,
    seed: int | None = None,
) -> SpeedupReport:
    """Simulate q workers trying to shortcut a T-step chain.

    Each worker spends ``guesses`` attempts guessing the chain state at the start
    of the final segment (length ceil(T/q)), from which it could finish in
    T/q steps. With ``guess_bits < 256`` the chain runs on a truncated state space
    so hits are observable; at 256 bits the space is the real one. q = 1 is the
    honest evaluator. A failed shortcut falls back to the honest run.
    """
    if T < 1 or q < 1 or trials < 1 or guesses < 1:
        raise ValueError("T, q, trials, guesses must be >= 1")
    if not 8 <= guess_bits <= 256:
        raise ValueError("guess_bits must be in [8, 256]")
    rng = random.Random(seed)
    seg = -(-T // q)
    target = T - seg
    space = 2**guess_bits
    f = truncated_step(guess_bits) if guess_bits < 256 else None

    honest = 0.0
    successes = 0
    for _ in range(trials):
        t0 = time.perf_counter()
        if f is None:
            truth = int.from_bytes(iterate(rng.randbytes(32), target), "big")
        else:
            truth = rng.randrange(space)
            for _ in range(target):
                truth = f(truth)
        honest += time.perf_counter() - t0
        if q == 1 or any(rng.randrange(space) == truth for _ in range(q * guesses)):
            successes += 1

    rate = successes / trials
    if q == 1:
        p_exact = bound = 1.0
        adv_steps = float(T)
    else:
        p_exact = -math.expm1(q * guesses * math.log1p(-1 / space)) if f else q * guesses / space
        bound = q * guesses / space
        adv_steps = rate * guesses * seg + (1 - rate) * T
    sigma = math.sqrt(p_exact * (1 - p_exact) / trials)
    return SpeedupReport(
        T=T, q=q, trials=trials, guess_bits=guess_bits, guesses=guesses,
        successes=successes, success_rate=rate, exact_probability=p_exact,
        union_bound=bound, sigma=sigma, segment_steps=seg,
        adversary_steps=adv_steps, effective_speedup=T / adv_steps,
        honest_seconds=honest,
    )


# forgeries

class Strategy(str, enum.Enum):
    BIT_FLIP = "bit-flip"
    WRONG_Y = "wrong-y"
    REPLAYED_CHALLENGES = "replayed-challenges"
    REGRAFTED_TREE = "regrafted-tree"


def flip_bit(data: bytes, pos: int) -> bytes:
    b = bytearray(data)
    b[pos // 8] ^= 1 << (pos % 8)
    return bytes(b)


def verify_bytes(kp: KeyPair, x: bytes, raw: bytes) -> Verdict:
    """Parse then verify; parse failures reject as MalformedProof."""
    try:
        proof = proof_from_dict(loads(raw))
    except MalformedProof:
        return Verdict.reject(Reason.MALFORMED_PROOF)
    return verify(kp, x, proof)


def cheating_trace(kp: KeyPair, proof: EvalProof, delta: float, rng: random.Random) -> CheckpointTrace:
    """A trace where round(delta * segments) segments were never computed.

    For each skipped segment the cheater writes a random end state and then
    continues honestly from it, so only that segment is inconsistent. The
    resulting trace is committed as if honest.
    """
    T, c = proof.T, proof.interval
    segments = -(-T // c)
    bad = set(rng.sample(range(segments), round(delta * segments)))
    s = seed_state(kp.pk, proof.x, proof.cw)
    cps = [(0, s)]
    for j in range(segments):
        n = min(c, T - j * c)
        s = rng.randbytes(32) if j in bad else iterate(s, n)
        cps.append((j * c + n, s))
    return CheckpointTrace(tuple(Checkpoint(i, st) for i, st in cps), c, T)


def forge_attempt(
    kp: KeyPair,
    proof: EvalProof,
    strategy: Strategy | str,
    seed: int | None = None,
    delta: float = 0.25,
) -> Verdict:
    strategy = Strategy(strategy)
    rng = random.Random(seed)
    if strategy is Strategy.BIT_FLIP:
        raw = dumps(proof_to_dict(proof)).encode()
        return verify_bytes(kp, proof.x, flip_bit(raw, rng.randrange(8 * len(raw))))
    if strategy is Strategy.WRONG_Y:
        y = flip_bit(proof.y, rng.randrange(256))
        return verify(kp, proof.x, replace(proof, y=y))
    if strategy is Strategy.REPLAYED_CHALLENGES:
        # a different committed tree, replaying the honest openings
        return verify(kp, proof.x, replace(proof, er=rng.randbytes(32)))
    trace = cheating_trace(kp, proof, delta, rng)
    return verify(kp, proof.x, commit_trace(kp, proof.x, proof.cw, trace, proof.k))


@dataclass(frozen=True)
class ForgeReport:
    strategy: str
    trials: int
    accepts: int
    reasons: dict
    delta: float | None = None
    k: int | None = None
    expected_detection: float | None = None
    detection_rate: float | None = None
    sigma: float | None = None

    @property
    def within_3_sigma(self) -> bool | None:
        if self.expected_detection is None:
            return None
        return abs(self.detection_rate - self.expected_detection) <= 3 * self.sigma


def forge_campaign(
    kp: KeyPair,
    proof: EvalProof,
    strategy: Strategy | str,
    trials: int,
    seed: int = 0,
    delta: float = 0.25,
) -> ForgeReport:
    strategy = Strategy(strategy)
    reasons: dict[str, int] = {}
    accepts = 0
    for i in range(trials):
        v = forge_attempt(kp, proof, strategy, seed=seed * 1_000_003 + i, delta=delta)
        if v.accepted:
            accepts += 1
        else:
            reasons[str(v.reason)] = reasons.get(str(v.reason), 0) + 1
    if strategy is not Strategy.REGRAFTED_TREE:
        return ForgeReport(strategy.value, trials, accepts, reasons)
    segments = proof.m - 1
    frac = round(delta * segments) / segments
    p = 1 - (1 - frac) ** proof.k
    return ForgeReport(
        strategy.value, trials, accepts, reasons, delta=delta, k=proof.k,
        expected_detection=p, detection_rate=1 - accepts / trials,
        sigma=math.sqrt(p * (1 - p) / trials),
    )
