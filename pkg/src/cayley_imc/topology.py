"""Finite Cayley tree construction and counting.

A finite Cayley tree of order ``eta`` has a root with ``eta + 1`` children,
every other internal node with exactly ``eta`` children, and all leaves at
the same depth.  The tree size parameter ``height`` follows the level
expansion 1, eta+1, (eta+1)*eta, ... so a tree of height ``h`` has its
leaves at depth ``h - 1`` (root depth 0).  Node ids are dense integers
assigned breadth-first, root = 0, children ordered left to right, which
makes every construction deterministic and traces reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Role",
    "TreeParams",
    "CayleyTopology",
    "node_count",
    "required_height",
    "build_topology",
]

# Construction rejects trees whose node count cannot be represented in a
# 64-bit signed integer; Python ints are unbounded but the platform being
# modelled is not.
_MAX_NODES = 2**63 - 1


class Role(Enum):
    ROOT = "root"
    INTERMEDIATE = "intermediate"
    LEAF = "leaf"


@dataclass(frozen=True)
class TreeParams:
    """Shape of the platform: branching order, height, and word width."""

    eta: int
    height: int
    word_size: int

    def __post_init__(self) -> None:
        if self.eta < 1:
            raise ValueError(f"eta must be >= 1, got {self.eta}")
        if self.height < 1:
            raise ValueError(f"height must be >= 1, got {self.height}")
        if self.word_size < 1:
            raise ValueError(f"word_size must be >= 1, got {self.word_size}")


def node_count(eta: int, height: int) -> int:
    """Total number of nodes in a finite Cayley tree of the given shape.

    A height-1 tree is the bare root.  Otherwise the root's eta+1 subtrees
    each contribute a geometric level series of order eta.

    Raises OverflowError once the count exceeds the 64-bit platform limit.
    """
    if eta < 1:
        raise ValueError(f"eta must be >= 1, got {eta}")
    if height < 1:
        raise ValueError(f"height must be >= 1, got {height}")
    if height == 1:
        return 1
    total = 1
    level = eta + 1
    for _ in range(height - 1):
        total += level
        if total > _MAX_NODES:
            raise OverflowError(
                f"node count for eta={eta}, height={height} exceeds 2^63-1"
            )
        level *= eta
    return total


def required_height(eta: int, list_len: int) -> int:
    """Minimal height whose non-root slots can hold ``list_len`` elements.

    The root never stores a list element, so a tree of height h offers
    node_count(eta, h) - 1 slots.  Heights below 2 have no slots at all;
    the smallest usable tree is returned even for empty lists.
    """
    if eta < 1:
        raise ValueError(f"eta must be >= 1, got {eta}")
    if list_len < 0:
        raise ValueError(f"list_len must be >= 0, got {list_len}")
    h = 2
    while node_count(eta, h) - 1 < list_len:
        h += 1
    return h


@dataclass(frozen=True)
class CayleyTopology:
    """Immutable adjacency structure of one finite Cayley tree.

    All per-node maps are tuples indexed by node id.  ``parent_of`` is -1
    for the root.  ``parent_slot`` gives a node's position inside its
    parent's children list (the inbox slot its upward sends land in).
    Instances are safe to share across concurrent simulator runs.
    """

    params: TreeParams
    n: int
    parent_of: tuple[int, ...]
    children_of: tuple[tuple[int, ...], ...]
    role_of: tuple[Role, ...]
    depth_of: tuple[int, ...]
    parent_slot: tuple[int, ...]
    leaves: tuple[int, ...]


def build_topology(params: TreeParams) -> CayleyTopology:
    """Construct the tree for ``params`` with breadth-first node ids."""
    eta, h = params.eta, params.height
    n = node_count(eta, h)

    parent = [-1] * n
    children: list[tuple[int, ...]] = [()] * n
    role = [Role.LEAF] * n
    depth = [0] * n
    slot = [0] * n

    role[0] = Role.ROOT
    next_id = 1
    frontier = [0]
    for level in range(1, h):
        new_frontier: list[int] = []
        for node in frontier:
            fanout = eta + 1 if node == 0 else eta
            kids = tuple(range(next_id, next_id + fanout))
            next_id += fanout
            children[node] = kids
            if node != 0:
                role[node] = Role.INTERMEDIATE
            for i, kid in enumerate(kids):
                parent[kid] = node
                depth[kid] = level
                slot[kid] = i
            new_frontier.extend(kids)
        frontier = new_frontier
    assert next_id == n, "level expansion disagrees with node_count"

    leaves = tuple(i for i in range(n) if role[i] is Role.LEAF)
    return CayleyTopology(
        params=params,
        n=n,
        parent_of=tuple(parent),
        children_of=tuple(children),
        role_of=tuple(role),
        depth_of=tuple(depth),
        parent_slot=tuple(slot),
        leaves=leaves,
    )
