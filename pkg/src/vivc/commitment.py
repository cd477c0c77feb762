"""Hash-based commit/decommit.

digest = SHA-256("VIVC/com" || len64(message) || message || randomness)
"""

from __future__ import annotations

import hmac
import secrets
from dataclasses import dataclass

from .errors import MessageTooLong
from .hashing import TAG_COM, TAG_RNG, tagged_hash, u64

RANDOMNESS_SIZE = 32
MAX_MESSAGE = 2**32


@dataclass(frozen=True)
class Commitment:
    digest: bytes

    def hex(self) -> str:
        return self.digest.hex()


@dataclass(frozen=True)
class Opening:
    message: bytes
    randomness: bytes


def commit(message: bytes, randomness: bytes) -> Commitment:
    if len(message) >= MAX_MESSAGE:
        raise MessageTooLong(f"message of {len(message)} bytes")
    if len(randomness) != RANDOMNESS_SIZE:
        raise ValueError("randomness must be 32 bytes")
    return Commitment(tagged_hash(TAG_COM, u64(len(message)), message, randomness))


def decommit(c: Commitment, o: Opening) -> bool:
    try:
        expected = commit(o.message, o.randomness)
    except ValueError:
        return False
    return hmac.compare_digest(expected.digest, c.digest)


class SessionRNG:
    """Randomness source for one prover session.

    Seeded sessions are reproducible (counter-mode SHA-256 over the seed); unseeded
    sessions draw from the OS. Each call returns fresh bytes, never a repeat.
    """

    def __init__(self, seed: bytes | None = None):
        self._seed = seed
        self._ctr = 0

    def randomness(self) -> bytes:
        if self._seed is None:
            return secrets.token_bytes(RANDOMNESS_SIZE)
        self._ctr += 1
        return tagged_hash(TAG_RNG, self._seed, u64(self._ctr))
