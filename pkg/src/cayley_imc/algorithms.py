"""The three in-memory schemes, orchestrated over the engine.

Elements live in the non-root nodes (breadth-first from node 1); unused
slots are padded so they can never influence an answer: word 0 under the
OR tournament, all-ones under AND, and a pre-cleared match flag for
searching.  The root's word carries the search key, and after a max/min
run it carries the answer.

Sorting alternates extremum rounds with key-comparison rounds: compute the
current extremum, report it, find every node holding it, permanently
disable their memories, repeat.  Each round retires one distinct value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from .engine import (
    Configuration,
    ProtocolError,
    default_cycle_budget,
    reset_configuration,
    run_until_quiescent,
)
from .node import BitWord, Mode, make_node
from .topology import CayleyTopology, TreeParams, node_count

__all__ = [
    "LoadedTree",
    "SearchResult",
    "ExtremumResult",
    "SortResult",
    "load_list",
    "search",
    "compute_max",
    "compute_min",
    "sort",
    "resource_report",
]


@dataclass
class LoadedTree:
    """A configuration holding one input list, ready to run."""

    cfg: Configuration
    occupied: frozenset[int]
    padding_policy: Literal["search_neutral", "max_identity", "min_identity"]


@dataclass(frozen=True)
class SearchResult:
    found: int
    cycles: int
    matched_nodes: frozenset[int] = frozenset()


@dataclass(frozen=True)
class ExtremumResult:
    value: int
    cycles: int


@dataclass(frozen=True)
class SortResult:
    output: list[int]
    cycles_total: int
    rounds: int
    per_round_cycles: list[int]


_PADDING = {
    Mode.SEARCH: "search_neutral",
    Mode.MAX: "max_identity",
    Mode.MIN: "min_identity",
}


def load_list(topo: CayleyTopology, elements: Sequence[int], mode: Mode,
              *, key: int | None = None) -> LoadedTree:
    """Distribute ``elements`` over the non-root nodes and initialise flags.

    Elements fill nodes 1..len(elements) in breadth-first order.  The root
    word is the search key, 0 for max, all-ones for min.  Search padding
    nodes are permanently disabled with match pre-forced to 0, so a key
    that happens to equal the padding word can never produce a false hit.
    """
    if mode not in _PADDING:
        raise ValueError(f"cannot load a tree for mode {mode}")
    if topo.params.height < 2:
        raise ValueError("height-1 trees have no data slots")
    w = topo.params.word_size
    limit = 1 << w
    if len(elements) > topo.n - 1:
        raise ValueError(
            f"{len(elements)} elements exceed the {topo.n - 1} non-root slots"
        )
    for x in elements:
        if not 0 <= x < limit:
            raise ValueError(f"element {x} out of range [0, 2^{w})")

    if mode is Mode.SEARCH:
        if key is None:
            raise ValueError("search mode requires a key")
        if not 0 <= key < limit:
            raise ValueError(f"key {key} out of range [0, 2^{w})")
        root_word = key
        pad_word = 0
    elif mode is Mode.MAX:
        root_word = 0
        pad_word = 0
    else:
        root_word = limit - 1
        pad_word = limit - 1

    nodes = [make_node(topo, 0, BitWord(w, root_word))]
    occupied = frozenset(range(1, len(elements) + 1))
    for i in range(1, topo.n):
        value = elements[i - 1] if i <= len(elements) else pad_word
        nodes.append(make_node(topo, i, BitWord(w, value)))
    if mode is Mode.SEARCH:
        for i in range(len(elements) + 1, topo.n):
            nodes[i].flags.perm_disabled = 1

    cfg = Configuration(topo=topo, nodes=nodes, mode=mode)
    reset_configuration(cfg, mode)
    return LoadedTree(cfg=cfg, occupied=occupied, padding_policy=_PADDING[mode])


def search(tree: LoadedTree, key: int, collect_matches: bool = False) -> SearchResult:
    """Run the full two-phase search; found means the root absorbed a 1.

    With ``collect_matches`` the result also carries every occupied node
    whose element equals the key, read from the match value each node held
    when its own comparison phase ended (the relay phase consumes the live
    flags afterwards).
    """
    cfg = tree.cfg
    if cfg.mode is not Mode.SEARCH:
        raise ValueError(f"tree is loaded for {cfg.mode.value}, not search")
    w = cfg.topo.params.word_size
    if not 0 <= key < (1 << w):
        raise ValueError(f"key {key} out of range [0, 2^{w})")
    cfg.root.word = BitWord(w, key)
    reset_configuration(cfg, Mode.SEARCH)
    _, cycles = run_until_quiescent(cfg, default_cycle_budget(cfg.topo))
    matched: frozenset[int] = frozenset()
    if collect_matches:
        matched = frozenset(
            i for i in tree.occupied if cfg.nodes[i].phase1_match == 1
        )
    return SearchResult(found=cfg.root.flags.state, cycles=cycles,
                        matched_nodes=matched)


def _run_extremum(tree: LoadedTree, mode: Mode) -> ExtremumResult:
    cfg = tree.cfg
    if cfg.mode is not mode:
        raise ValueError(f"tree is loaded for {cfg.mode.value}, not {mode.value}")
    reset_configuration(cfg, mode)
    _, cycles = run_until_quiescent(cfg, default_cycle_budget(cfg.topo))
    return ExtremumResult(value=cfg.root.word.value, cycles=cycles)


def compute_max(tree: LoadedTree) -> ExtremumResult:
    """OR-tournament over all enabled words; 0 when nothing is enabled."""
    return _run_extremum(tree, Mode.MAX)


def compute_min(tree: LoadedTree) -> ExtremumResult:
    """AND-tournament over all enabled words; all-ones when nothing is enabled."""
    return _run_extremum(tree, Mode.MIN)


def sort(topo: CayleyTopology, elements: Sequence[int],
         order: Literal["desc", "asc"] = "desc") -> SortResult:
    """Sort by repeated extremum extraction, descending by default.

    Each round: run the tournament (the root ends up holding the current
    extremum, which doubles as the next search key), reset for searching,
    run the comparison phase only, then permanently disable every occupied
    node whose match survived and append the value once per such node.
    Rounds repeat until every occupied node is retired, so the round count
    equals the number of distinct values.
    """
    if order not in ("desc", "asc"):
        raise ValueError(f"order must be 'desc' or 'asc', got {order!r}")
    mode = Mode.MAX if order == "desc" else Mode.MIN
    if not elements:
        return SortResult(output=[], cycles_total=0, rounds=0, per_round_cycles=[])

    tree = load_list(topo, elements, mode)
    cfg = tree.cfg
    # Padding slots sit out the whole sort; only occupied nodes count for
    # termination, otherwise an empty slot would inject its padding word.
    for i in range(len(elements) + 1, topo.n):
        cfg.nodes[i].flags.perm_disabled = 1

    budget = default_cycle_budget(topo)
    output: list[int] = []
    per_round: list[int] = []
    live = set(tree.occupied)
    while live:
        reset_configuration(cfg, mode)
        _, cycles_a = run_until_quiescent(cfg, budget)
        value = cfg.root.word.value

        reset_configuration(cfg, Mode.SEARCH, phase1_only=True)
        _, cycles_b = run_until_quiescent(cfg, budget)

        matched = [i for i in live if cfg.nodes[i].flags.match == 1]
        if not matched:
            raise ProtocolError(
                f"sort round found no node holding {value}; live set {sorted(live)}"
            )
        for i in matched:
            cfg.nodes[i].flags.perm_disabled = 1
            live.remove(i)
        output.extend([value] * len(matched))
        per_round.append(cycles_a + cycles_b)
    return SortResult(
        output=output,
        cycles_total=sum(per_round),
        rounds=len(per_round),
        per_round_cycles=per_round,
    )


def resource_report(params: TreeParams, scheme: Literal["search", "sort"]) -> int:
    """Flag-overhead bits of a scheme on the whole tree.

    Searching needs three one-bit flags per node.  Sorting needs the search
    flags plus the tournament's memory, child and parent links, and the
    per-node word itself is counted with them.
    """
    n = node_count(params.eta, params.height)
    if scheme == "search":
        return 3 * n
    if scheme == "sort":
        return n * (params.word_size + params.eta + 5)
    raise ValueError(f"unknown scheme {scheme!r}")
