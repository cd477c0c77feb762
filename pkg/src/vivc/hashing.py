"""Domain-separated SHA-256 and the hash-invocation counter used for cost accounting.

Every SHA-256 call made by the protocol goes through this module so that tests
and benchmarks can count invocations per domain tag::

    with count_hashes() as hc:
        iterate(s, 100)
    assert hc["VIVC/step"] == 100
"""

from __future__ import annotations

import hashlib
from collections import Counter
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator

# looked up at call time so tests can wrap it with an independent counter
_sha256 = hashlib.sha256

DIGEST_SIZE = 32

TAG_STEP = b"VIVC/step"
TAG_COM = b"VIVC/com"
TAG_RANDGEN = b"VIVC/randgen"
TAG_FS = b"VIVC/fs"
TAG_PK = b"VIVC/pk"
TAG_VK = b"VIVC/vk"
TAG_BIND = b"VIVC/bind"
TAG_SRS = b"VIVC/srs"
TAG_SEED = b"VIVC/seed"
TAG_LEAF = b"VIVC/leaf"
TAG_NODE = b"VIVC/node"
TAG_STMT = b"VIVC/stmt"
TAG_RNG = b"VIVC/rng"
TAG_UNTAGGED = b""


class HashCounter(Counter):
    """Per-tag tally of SHA-256 invocations."""

    @property
    def total(self) -> int:
        return sum(self.values())

    def by_tag(self) -> dict[str, int]:
        return {(k.decode() or "untagged"): v for k, v in sorted(self.items())}


_active: ContextVar[HashCounter | None] = ContextVar("vivc_hash_counter", default=None)


def record(tag: bytes, n: int = 1) -> None:
    hc = _active.get()
    if hc is not None:
        hc[tag] += n


@contextmanager
def count_hashes() -> Iterator[HashCounter]:
    hc = HashCounter()
    token = _active.set(hc)
    try:
        yield hc
    finally:
        _active.reset(token)


def tagged_hash(tag: bytes, *parts: bytes) -> bytes:
    """SHA-256(tag || parts...), counted under ``tag``."""
    h = _sha256(tag)
    for p in parts:
        h.update(p)
    record(tag)
    return h.digest()


def plain_hash(data: bytes) -> bytes:
    record(TAG_UNTAGGED)
    return _sha256(data).digest()


def u64(n: int) -> bytes:
    return n.to_bytes(8, "big")


def u32(n: int) -> bytes:
    return n.to_bytes(4, "big")
