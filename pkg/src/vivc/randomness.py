"""RandGen, the double-log / alpha schedule of the precomputation loop, delay
derivation from R, and Fiat-Shamir challenge indices."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadRange, EmptySeed, RTooSmall
from .hashing import TAG_FS, TAG_RANDGEN, tagged_hash, u64
from .seq_hash import T_MAX


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


def rand_gen(seed: bytes) -> int:
    """128-bit R >= 2 drawn deterministically from ``seed``."""
    if not seed:
        raise EmptySeed("seed must be nonempty")
    digest = tagged_hash(TAG_RANDGEN, seed)
    r = int.from_bytes(digest[:16], "big")
    ctr = 0
    while r < 2:
        ctr += 1
        digest = tagged_hash(TAG_RANDGEN, seed, u64(ctr))
        r = int.from_bytes(digest[:16], "big")
    return r


def double_log(r: int) -> int:
    if r < 2:
        raise RTooSmall("R must be >= 2")
    return ceil_log2(ceil_log2(r))


@dataclass(frozen=True)
class AlphaState:
    alpha: int
    round: int = 0


def derive_alpha(r: int) -> AlphaState:
    if r < 4:
        raise RTooSmall("R must be >= 4 for a nontrivial loop")
    return AlphaState(ceil_log2(r) ** double_log(r), 0)


def alpha_next(a: AlphaState) -> AlphaState:
    if a.alpha < 1:
        raise ValueError("alpha must be >= 1")
    if a.alpha == 1:
        return a
    # ceiling halving: reaches 1 after exactly ceil_log2(alpha0) rounds
    return AlphaState((a.alpha + 1) // 2, a.round + 1)


def alpha_rounds(r: int) -> int:
    return ceil_log2(derive_alpha(r).alpha)


def derive_delay(r: int, t_min: int, t_max: int) -> int:
    if not 1 <= t_min <= t_max <= T_MAX:
        raise BadRange(f"need 1 <= T_min <= T_max <= 2^32, got [{t_min}, {t_max}]")
    return t_min + r % (t_max - t_min + 1)


def fiat_shamir_indices(root: bytes, y: bytes, k: int, m: int, context: bytes = b"") -> list[int]:
    """k challenge indices in [0, m) from SHA-256("VIVC/fs" || root || y || context || j).

    ``context`` is empty for the bare transcript; the prover and verifier pass a
    statement digest so every public parameter of a proof is bound into the challenges.
    """
    if k < 1 or m < 1:
        raise ValueError("k and m must be >= 1")
    return [
        int.from_bytes(tagged_hash(TAG_FS, root, y, context, u64(j)), "big") % m
        for j in range(k)
    ]
