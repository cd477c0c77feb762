"""TrustedSetup(lambda) -> {pk, vk}, a contribution-chain ceremony for the
setup seed, and the commit/decommit precomputation loop.

The setup seed is toxic waste: it is never stored on the KeyPair and callers
are expected to discard it once keys are derived.
"""

from __future__ import annotations

import hmac
from dataclasses import dataclass, field, replace

from .commitment import Commitment, Opening, SessionRNG, commit, decommit
from .errors import BadLambda, BindingInvalid, EmptyEntropy, EmptySeed
from .hashing import TAG_BIND, TAG_PK, TAG_SRS, TAG_VK, plain_hash, tagged_hash, u32, u64
from .randomness import AlphaState, alpha_next, derive_alpha

LAMBDAS = (80, 128, 256)

GENESIS = bytes.fromhex("fe0e41a02d802a1c89ba9c04b6ffda1d33ac947de96dd324a742f14a6bac07de")
"""SHA-256(b"VIVC/srs-genesis"), the fold start of every ceremony."""


@dataclass(frozen=True)
class KeyPair:
    lam: int
    pk: bytes
    vk: bytes
    binding: bytes

    def binding_ok(self) -> bool:
        if len(self.pk) != 32 or len(self.vk) != 32 or len(self.binding) != 32:
            return False
        if self.pk == self.vk:
            return False
        return hmac.compare_digest(tagged_hash(TAG_BIND, self.pk, self.vk), self.binding)


def trusted_setup(lam: int, setup_seed: bytes) -> KeyPair:
    if lam not in LAMBDAS:
        raise BadLambda(f"lambda must be one of {LAMBDAS}, got {lam}")
    if not setup_seed:
        raise EmptySeed("setup seed must be nonempty")
    pk = tagged_hash(TAG_PK, u32(lam), setup_seed)
    vk = tagged_hash(TAG_VK, u32(lam), setup_seed)
    return KeyPair(lam, pk, vk, tagged_hash(TAG_BIND, pk, vk))


@dataclass
class ChallengeCounter:
    """Counts challenges answered under one keypair.

    Parameters should be regenerated after ``limit`` challenges; the counter
    only reports that, enforcement is the caller's policy.
    """

    limit: int
    used: int = 0

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("limit must be >= 1")

    def record(self, n: int = 1) -> None:
        if n < 0:
            raise ValueError("cannot record a negative count")
        self.used += n

    @property
    def refresh_due(self) -> bool:
        return self.used >= self.limit


@dataclass(frozen=True)
class CeremonyChain:
    contributions: tuple[bytes, ...] = ()
    srs: bytes = GENESIS

    @classmethod
    def refold(cls, contributions) -> "CeremonyChain":
        srs = GENESIS
        for c in contributions:
            srs = tagged_hash(TAG_SRS, srs, c)
        return cls(tuple(contributions), srs)

    def consistent(self) -> bool:
        return CeremonyChain.refold(self.contributions).srs == self.srs


def ceremony_contribute(chain: CeremonyChain, entropy: bytes) -> CeremonyChain:
    if not entropy:
        raise EmptyEntropy("contribution entropy must be nonempty")
    c = plain_hash(entropy)
    return CeremonyChain(chain.contributions + (c,), tagged_hash(TAG_SRS, chain.srs, c))


@dataclass(frozen=True)
class Round:
    alpha: int
    commitment: Commitment
    opening: Opening
    verifier_bit: int


@dataclass(frozen=True)
class SetupTranscript:
    rounds: tuple[Round, ...] = field(default_factory=tuple)
    final_bit: int = 0
    alpha0: int = 1


def round_message(pk: bytes, x: bytes, w: bytes, index: int) -> bytes:
    return pk + x + w + u64(index)


def algorithm1_precompute(
    r: int,
    kp: KeyPair,
    x: bytes,
    w: bytes,
    rng_seed: bytes | None = None,
    corrupt_round: int | None = None,
) -> SetupTranscript:
    """Run the alpha-scheduled commit/decommit loop until alpha reaches 1.

    Each round the prover commits to ``pk || x || w || round`` with fresh
    randomness and the verifier decommits. A failed decommit halts the loop with
    final bit 0. ``corrupt_round`` flips one byte of that round's opening, for
    exercising the halt path.
    """
    if not kp.binding_ok():
        raise BindingInvalid("keypair binding does not verify")
    rng = SessionRNG(rng_seed)
    a: AlphaState = derive_alpha(r)
    alpha0 = a.alpha
    rounds: list[Round] = []
    while a.alpha != 1:
        msg = round_message(kp.pk, x, w, a.round)
        opening = Opening(msg, rng.randomness())
        c = commit(opening.message, opening.randomness)
        if corrupt_round == a.round:
            opening = replace(opening, randomness=bytes([opening.randomness[0] ^ 1]) + opening.randomness[1:])
        bit = int(decommit(c, opening))
        rounds.append(Round(a.alpha, c, opening, bit))
        if not bit:
            return SetupTranscript(tuple(rounds), 0, alpha0)
        a = alpha_next(a)
    return SetupTranscript(tuple(rounds), 1, alpha0)


def replay_transcript(tr: SetupTranscript) -> SetupTranscript:
    """Re-run the verifier side over recorded rounds, applying the halt rule."""
    rounds: list[Round] = []
    alpha = AlphaState(tr.alpha0)
    for rd in tr.rounds:
        if rd.alpha != alpha.alpha:
            return SetupTranscript(tuple(rounds), 0, tr.alpha0)
        bit = int(decommit(rd.commitment, rd.opening))
        rounds.append(replace(rd, verifier_bit=bit))
        if not bit:
            return SetupTranscript(tuple(rounds), 0, tr.alpha0)
        alpha = alpha_next(alpha)
    return SetupTranscript(tuple(rounds), int(alpha.alpha == 1), tr.alpha0)
