"""The sequential root function and its t-fold composition.

``step`` is one tagged SHA-256 call; ``iterate`` composes it ``n`` times on a
single strand. Nothing here may be parallelized: the delay is the point.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass
from typing import Callable, Hashable

from . import hashing
from .errors import DelayTooLarge
from .hashing import DIGEST_SIZE, TAG_STEP

HashState = bytes

T_MAX = 2**32


def check_state(s: bytes) -> HashState:
    if not isinstance(s, (bytes, bytearray)) or len(s) != DIGEST_SIZE:
        raise ValueError(f"hash state must be {DIGEST_SIZE} bytes")
    return bytes(s)


def step(s: HashState) -> HashState:
    hashing.record(TAG_STEP)
    return hashing._sha256(TAG_STEP + s).digest()


def iterate(s: HashState, n: int, t_max: int = T_MAX) -> HashState:
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    if n > t_max:
        raise DelayTooLarge(f"{n} iterations exceeds cap {t_max}")
    sha = hashing._sha256
    tag = TAG_STEP
    for _ in range(n):
        s = sha(tag + s).digest()
    hashing.record(TAG_STEP, n)
    return s


def brent(f: Callable[[Hashable], Hashable], x0: Hashable) -> tuple[int, int]:
    """Brent's cycle detection. Returns ``(tail, cycle)`` lengths of the rho from ``x0``."""
    power = lam = 1
    tortoise = x0
    hare = f(x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1

    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise = f(tortoise)
        hare = f(hare)
        mu += 1
    return mu, lam


def truncated_step(bits: int) -> Callable[[int], int]:
    """``step`` restricted to a ``bits``-bit state space (top bits of the digest)."""
    shift = 8 * DIGEST_SIZE - bits

    def f(v: int) -> int:
        return int.from_bytes(step(v.to_bytes(DIGEST_SIZE, "big")), "big") >> shift

    return f


@dataclass(frozen=True)
class CycleStats:
    bits: int
    trials: int
    mean_rho: float
    stderr: float
    mean_tail: float
    mean_cycle: float

    @property
    def expected_rho(self) -> float:
        # random mapping on N points: E[tail + cycle] ~ sqrt(pi * N / 2)
        return math.sqrt(math.pi * 2**self.bits / 2)


def cycle_experiment(bits: int, trials: int, seed: int | None = None) -> CycleStats:
    if not 8 <= bits <= 24:
        raise ValueError("bits must be in [8, 24]")
    if trials < 2:
        raise ValueError("need at least two trials")
    rng = random.Random(seed)
    f = truncated_step(bits)
    tails, cycles = [], []
    for _ in range(trials):
        mu, lam = brent(f, rng.randrange(2**bits))
        tails.append(mu)
        cycles.append(lam)
    rhos = [a + b for a, b in zip(tails, cycles)]
    return CycleStats(
        bits=bits,
        trials=trials,
        mean_rho=statistics.fmean(rhos),
        stderr=statistics.stdev(rhos) / math.sqrt(trials),
        mean_tail=statistics.fmean(tails),
        mean_cycle=statistics.fmean(cycles),
    )
