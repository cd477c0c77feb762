"""Binary Merkle tree over 32-byte leaves; an odd node is paired with itself."""

from __future__ import annotations

import hmac
from typing import Callable, NamedTuple, Sequence

from .errors import EmptyLeaves, IndexOutOfRange
from .hashing import TAG_LEAF, TAG_NODE, tagged_hash, u64

LEFT = "L"
RIGHT = "R"


class PathNode(NamedTuple):
    side: str  # which side the sibling sits on
    sibling: bytes


def leaf_hash(index: int, state: bytes) -> bytes:
    return tagged_hash(TAG_LEAF, u64(index), state)


def node_hash(left: bytes, right: bytes) -> bytes:
    return tagged_hash(TAG_NODE, left, right)


def _levels(leaves: Sequence[bytes]) -> list[list[bytes]]:
    if not leaves:
        raise EmptyLeaves("merkle tree needs at least one leaf")
    levels = [list(leaves)]
    while len(levels[-1]) > 1:
        cur = levels[-1]
        if len(cur) % 2:
            cur = cur + [cur[-1]]
        levels.append([node_hash(cur[i], cur[i + 1]) for i in range(0, len(cur), 2)])
    return levels


def merkle_root(leaves: Sequence[bytes]) -> bytes:
    return _levels(leaves)[-1][0]


def path_length(leaf_count: int) -> int:
    return (leaf_count - 1).bit_length()


class MerkleTree:
    """Materialized tree, so many openings share one build."""

    def __init__(self, leaves: Sequence[bytes]):
        self.levels = _levels(leaves)

    @property
    def root(self) -> bytes:
        return self.levels[-1][0]

    def __len__(self) -> int:
        return len(self.levels[0])

    def open(self, i: int) -> list[PathNode]:
        if not 0 <= i < len(self):
            raise IndexOutOfRange(f"leaf {i} not in tree of {len(self)}")
        path = []
        for level in self.levels[:-1]:
            if i % 2:
                path.append(PathNode(LEFT, level[i - 1]))
            else:
                path.append(PathNode(RIGHT, level[i + 1] if i + 1 < len(level) else level[i]))
            i //= 2
        return path


def merkle_open(leaves: Sequence[bytes], i: int) -> list[PathNode]:
    return MerkleTree(leaves).open(i)


def merkle_verify(
    root: bytes,
    leaf: bytes,
    path: Sequence[PathNode],
    index: int,
    leaf_count: int | None = None,
    hash_node: Callable[[bytes, bytes], bytes] = node_hash,
) -> bool:
    """Recompute the root from ``leaf`` along ``path``.

    Sides must agree with the bits of ``index``. When ``leaf_count`` is known the
    path length and the self-pairing of odd trailing nodes are enforced too.
    """
    if index < 0:
        return False
    width = None
    if leaf_count is not None:
        if not 0 <= index < leaf_count or len(path) != path_length(leaf_count):
            return False
        width = leaf_count
    node = leaf
    i = index
    for side, sib in path:
        if i % 2:
            if side != LEFT:
                return False
            node = hash_node(sib, node)
        else:
            if side != RIGHT:
                return False
            if width is not None and i == width - 1 and width % 2 and sib != node:
                return False
            node = hash_node(node, sib)
        i //= 2
        if width is not None:
            width = (width + 1) // 2
    if i != 0:
        return False
    return hmac.compare_digest(node, root)
