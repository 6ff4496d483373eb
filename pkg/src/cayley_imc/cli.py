"""Command-line front end.

Subcommands: search, max, min, sort (run a scheme and verify against the
oracle), info (topology arithmetic), trace (verify a previously written
trace file by replaying it), bench (compare sort cycle counts with the
classic comparison sorts).

Exit status: 0 on success, 2 when the simulator and the oracle disagree,
1 on any other error.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from typing import Sequence

from . import algorithms, engine, oracle
from .node import BitWord, Mode
from .topology import TreeParams, build_topology, node_count, required_height

__all__ = ["main", "parse_input"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIVERGENCE = 2


class InputError(ValueError):
    """Bad input text or inconsistent run parameters."""


def parse_input(text: str, word_size: int) -> list[int]:
    """Parse a list of non-negative decimal integers.

    Values are separated by whitespace, commas or newlines; lines starting
    with '#' are ignored.  Every value is range-checked against the word
    size.  Errors report the line and column of the offending token.
    """
    limit = 1 << word_size
    values: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("#"):
            continue
        for token_match in re.finditer(r"[^\s,]+", line):
            token = token_match.group()
            col = token_match.start() + 1
            if not token.isdigit():
                raise InputError(
                    f"line {lineno}, column {col}: {token!r} is not a "
                    "non-negative decimal integer"
                )
            value = int(token)
            if value >= limit:
                raise InputError(
                    f"line {lineno}, column {col}: value {value} does not fit "
                    f"in a {word_size}-bit word (max {limit - 1})"
                )
            values.append(value)
    return values


def _load_elements(args: argparse.Namespace) -> list[int]:
    if args.input and args.list:
        raise InputError("give either --input or --list, not both")
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            return parse_input(fh.read(), args.word_size)
    if args.list is not None:
        return parse_input(args.list, args.word_size)
    if args.seed is not None:
        rng = random.Random(args.seed)
        limit = 1 << args.word_size
        return [rng.randrange(limit) for _ in range(args.count)]
    raise InputError("no input list: give --input, --list, or --seed")


def _resolve_height(args: argparse.Namespace, n_elements: int) -> int:
    needed = required_height(args.eta, n_elements)
    if args.height is None:
        return needed
    if args.height < needed:
        raise InputError(
            f"--height {args.height} offers "
            f"{node_count(args.eta, args.height) - 1} slots; "
            f"{n_elements} elements need height >= {needed}"
        )
    return args.height


def _print_block(pairs: list[tuple[str, object]], as_json: bool) -> None:
    if as_json:
        print(json.dumps({k: v for k, v in pairs}, separators=(",", ":")))
    else:
        for k, v in pairs:
            print(f"{k}: {v}")


def _open_trace(path: str, cfg: engine.Configuration):
    fh = open(path, "w", encoding="utf-8")

    def begin_segment() -> None:
        fh.write(engine.trace_header(cfg) + "\n")
        for ev in engine.snapshot(cfg):
            fh.write(ev.to_json() + "\n")

    def on_step(c: engine.Configuration, emissions: list[dict[str, int]]) -> None:
        for ev in engine.snapshot(c, emissions):
            fh.write(ev.to_json() + "\n")

    return fh, begin_segment, on_step


def _run_scheme(args: argparse.Namespace) -> int:
    elements = _load_elements(args)
    command = args.command
    if command == "search" and args.key is None:
        raise InputError("search requires --key")

    height = _resolve_height(args, len(elements))
    params = TreeParams(args.eta, height, args.word_size)
    topo = build_topology(params)
    limit = 1 << args.word_size

    pairs: list[tuple[str, object]] = [
        ("command", command),
        ("eta", params.eta),
        ("height", params.height),
        ("word_size", params.word_size),
        ("n", topo.n),
        ("elements", len(elements)),
    ]

    trace_ctx = None
    expected: object
    if command == "search":
        key = args.key
        if not 0 <= key < limit:
            raise InputError(f"--key {key} does not fit in a {args.word_size}-bit word")
        tree = algorithms.load_list(topo, elements, Mode.SEARCH, key=key)
        if args.trace_out:
            trace_ctx = _trace_run_search(tree, key, args.trace_out)
            result, cycles = trace_ctx
        else:
            res = algorithms.search(tree, key)
            result, cycles = res.found, res.cycles
        pairs += [
            ("key", key),
            ("found", "yes" if result else "no"),
            ("cycles", cycles),
            ("overhead_bits", algorithms.resource_report(params, "search")),
        ]
        expected = oracle.oracle_search(elements, key)
        actual: object = result
    elif command in ("max", "min"):
        mode = Mode.MAX if command == "max" else Mode.MIN
        tree = algorithms.load_list(topo, elements, mode)
        if args.trace_out:
            value, cycles = _trace_run_extremum(tree, mode, args.trace_out)
        else:
            res = algorithms.compute_max(tree) if mode is Mode.MAX \
                else algorithms.compute_min(tree)
            value, cycles = res.value, res.cycles
        pairs += [("value", value), ("cycles", cycles)]
        identity = 0 if mode is Mode.MAX else limit - 1
        expected = oracle.oracle_extremum(elements, command, identity)
        actual = value
    else:  # sort
        if args.trace_out:
            raise InputError("--trace-out supports single runs: search, max, min")
        res = algorithms.sort(topo, elements, order=args.order)
        pairs += [
            ("order", args.order),
            ("output", ",".join(str(x) for x in res.output)),
            ("rounds", res.rounds),
            ("cycles", res.cycles_total),
            ("per_round_cycles", ",".join(str(c) for c in res.per_round_cycles)),
            ("overhead_bits", algorithms.resource_report(params, "sort")),
        ]
        expected = oracle.oracle_sort_desc(elements)
        if args.order == "asc":
            expected = list(reversed(expected))
        actual = res.output

    status = EXIT_OK
    if args.verify:
        report = oracle.compare(expected, actual)
        pairs.append(("oracle", "agree" if report.agreed else "DIVERGENCE"))
        if not report.agreed:
            pairs.append(("oracle_detail", report.detail))
            status = EXIT_DIVERGENCE
    if args.trace_out:
        pairs.append(("trace", args.trace_out))
    _print_block(pairs, args.json)
    return status


def _trace_run_search(tree, key, path):
    cfg = tree.cfg
    cfg.root.word = BitWord(cfg.topo.params.word_size, key)
    engine.reset_configuration(cfg, Mode.SEARCH)
    fh, begin, on_step = _open_trace(path, cfg)
    try:
        begin()
        _, cycles = engine.run_until_quiescent(
            cfg, engine.default_cycle_budget(cfg.topo), on_step)
    finally:
        fh.close()
    return cfg.root.flags.state, cycles


def _trace_run_extremum(tree, mode, path):
    cfg = tree.cfg
    engine.reset_configuration(cfg, mode)
    fh, begin, on_step = _open_trace(path, cfg)
    try:
        begin()
        _, cycles = engine.run_until_quiescent(
            cfg, engine.default_cycle_budget(cfg.topo), on_step)
    finally:
        fh.close()
    return cfg.root.word.value, cycles


def _run_info(args: argparse.Namespace) -> int:
    height = args.height
    n_elements = None
    if args.input or args.list is not None or args.seed is not None:
        n_elements = len(_load_elements(args))
        height = _resolve_height(args, n_elements)
    elif height is None:
        raise InputError("info needs --height or an input list")
    params = TreeParams(args.eta, height, args.word_size)
    topo = build_topology(params)
    depth_counts: dict[int, int] = {}
    for d in topo.depth_of:
        depth_counts[d] = depth_counts.get(d, 0) + 1
    pairs: list[tuple[str, object]] = [
        ("command", "info"),
        ("eta", params.eta),
        ("height", params.height),
        ("word_size", params.word_size),
        ("n", topo.n),
        ("slots", topo.n - 1),
        ("leaves", len(topo.leaves)),
        ("nodes_per_level", ",".join(str(depth_counts[d]) for d in sorted(depth_counts))),
        ("search_overhead_bits", algorithms.resource_report(params, "search")),
        ("sort_overhead_bits", algorithms.resource_report(params, "sort")),
    ]
    if n_elements is not None:
        pairs.insert(6, ("elements", n_elements))
    _print_block(pairs, args.json)
    return EXIT_OK


def _run_trace_verify(args: argparse.Namespace) -> int:
    """Replay each trace segment from its cycle-0 snapshot and compare."""
    with open(args.trace_file, "r", encoding="utf-8") as fh:
        segments = engine.parse_trace(fh)
    if not segments:
        raise InputError(f"{args.trace_file}: no trace segments found")
    total = 0
    for seg_idx, (meta, events) in enumerate(segments):
        cfg = engine.configuration_from_events(meta, events)
        replayed = [e.to_json() for e in engine.snapshot(cfg)]
        budget = engine.default_cycle_budget(cfg.topo)

        def on_step(c, emissions):
            replayed.extend(e.to_json() for e in engine.snapshot(c, emissions))

        engine.run_until_quiescent(cfg, budget, on_step)
        replayed_parsed = [json.loads(line) for line in replayed]
        if replayed_parsed != events:
            print(f"trace: segment {seg_idx} diverges from replay")
            for i, (a, b) in enumerate(zip(events, replayed_parsed)):
                if a != b:
                    print(f"  first difference at event {i}:")
                    print(f"    recorded: {json.dumps(a, separators=(',', ':'))}")
                    print(f"    replayed: {json.dumps(b, separators=(',', ':'))}")
                    break
            else:
                print(f"  recorded {len(events)} events, replay produced "
                      f"{len(replayed_parsed)}")
            return EXIT_DIVERGENCE
        total += len(events)
    print(f"trace: {len(segments)} segment(s), {total} events, replay matches")
    return EXIT_OK


def _run_bench(args: argparse.Namespace) -> int:
    """Cycle counts for the tree sort next to the classic sorters."""
    rng = random.Random(args.seed if args.seed is not None else 0)
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    limit = 1 << args.word_size
    rows = []
    for size in sizes:
        elements = [rng.randrange(limit) for _ in range(size)]
        height = required_height(args.eta, size)
        topo = build_topology(TreeParams(args.eta, height, args.word_size))
        t0 = time.perf_counter()
        res = algorithms.sort(topo, elements)
        sim_ms = (time.perf_counter() - t0) * 1e3
        for name in oracle.BASELINE_SORTS:
            t0 = time.perf_counter()
            out, comps = oracle.run_baseline(name, elements)
            ms = (time.perf_counter() - t0) * 1e3
            if out != res.output:
                print(f"bench: {name} disagrees with in-memory sort on size {size}")
                return EXIT_DIVERGENCE
            rows.append((size, name, "-", comps, f"{ms:.3f}"))
        rows.append((size, "in-memory", res.cycles_total, "-", f"{sim_ms:.3f}"))
    header = ("size", "algorithm", "cycles", "comparisons", "wall_ms")
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(5)]
    for row in [header] + rows:
        print("  ".join(str(v).ljust(widths[i]) for i, v in enumerate(row)))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, *, with_inputs: bool = True) -> None:
    p.add_argument("--eta", type=int, default=2, help="branching order (default 2)")
    p.add_argument("--word-size", type=int, default=8, dest="word_size",
                   help="bits per memory word (default 8)")
    p.add_argument("--height", type=int, default=None,
                   help="tree height; default is the smallest that fits the list")
    p.add_argument("--json", action="store_true", help="emit one JSON object")
    if with_inputs:
        p.add_argument("--input", help="path to a list file")
        p.add_argument("--list", help="inline comma/space separated list")
        p.add_argument("--seed", type=int, default=None,
                       help="generate a random list from this seed")
        p.add_argument("--count", type=int, default=10,
                       help="length of a generated list (default 10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayley-imc",
        description="Cycle-accurate simulator of a Cayley-tree in-memory "
                    "computing platform",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, desc in (("search", "look a key up in the tree"),
                       ("max", "compute the maximum in-memory"),
                       ("min", "compute the minimum in-memory")):
        p = sub.add_parser(name, help=desc)
        _add_common(p)
        if name == "search":
            p.add_argument("--key", type=int, default=None, help="key to search for")
        p.add_argument("--trace-out", dest="trace_out", default=None,
                       help="write the per-cycle trace stream to this path")
        p.add_argument("--no-verify", dest="verify", action="store_false",
                       help="skip the oracle cross-check")

    p = sub.add_parser("sort", help="sort the list in-memory")
    _add_common(p)
    p.add_argument("--order", choices=("desc", "asc"), default="desc")
    p.add_argument("--trace-out", dest="trace_out", default=None)
    p.add_argument("--no-verify", dest="verify", action="store_false")

    p = sub.add_parser("info", help="topology and space arithmetic")
    _add_common(p)

    p = sub.add_parser("trace", help="verify a trace file by replaying it")
    p.add_argument("trace_file", help="trace file written by --trace-out")

    p = sub.add_parser("bench", help="compare with the classic sorters")
    p.add_argument("--eta", type=int, default=2)
    p.add_argument("--word-size", type=int, default=8, dest="word_size")
    p.add_argument("--sizes", default="8,32,128",
                   help="comma-separated list sizes (default 8,32,128)")
    p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("search", "max", "min", "sort"):
            return _run_scheme(args)
        if args.command == "info":
            return _run_info(args)
        if args.command == "trace":
            return _run_trace_verify(args)
        return _run_bench(args)
    except (InputError, ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except engine.ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
