"""Hash-chain verifiable delay function with Merkle-committed checkpoints."""

from .commitment import Commitment, Opening, commit, decommit
from .errors import MalformedProof, VIVCError
from .hashing import count_hashes
from .prover import CheckpointTrace, EvalProof, StateProof, evaluate, prove_state, seed_state
from .randomness import derive_alpha, derive_delay, double_log, fiat_shamir_indices, rand_gen
from .seq_hash import cycle_experiment, iterate, step
from .trusted_setup import CeremonyChain, KeyPair, algorithm1_precompute, ceremony_contribute, trusted_setup
from .verifier import Reason, Verdict, entropy_D, verify, verify_checkpoint

__all__ = [
    "CeremonyChain", "CheckpointTrace", "Commitment", "EvalProof", "KeyPair", "MalformedProof",
    "Opening", "Reason", "StateProof", "VIVCError", "Verdict", "algorithm1_precompute",
    "ceremony_contribute", "commit", "count_hashes", "cycle_experiment", "decommit",
    "derive_alpha", "derive_delay", "double_log", "entropy_D", "evaluate", "fiat_shamir_indices",
    "iterate", "prove_state", "rand_gen", "seed_state", "step", "trusted_setup", "verify",
    "verify_checkpoint",
]
