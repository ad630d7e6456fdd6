"""Command line front end: ``leafage <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or format error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import List, Optional

from ._blob import FormatError
from .decompose import ODD_MODES, ModelError, format_model, parse_model
from .encoded import EncodedGraph, build_full
from .oracle import gen_model, lb_check, oracle_graph
from .tree import MalformedTreeError

SPACE_KEYS = ("H", "K", "F", "D", "Pi", "C", "firstFlags", "Y", "total", "reference", "vertex_map")


class UsageError(Exception):
    pass


def _seed(args) -> int:
    env = os.environ.get("CHORDAL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CHORDAL_SEED={env!r} is not an integer") from None
    return args.seed


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: Optional[str], data) -> None:
    if path is None or path == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def _stats_line(report) -> str:
    keys = ("n", "k", "m_H") + SPACE_KEYS
    return "stats " + " ".join(f"{key}={report[key]}" for key in keys)


def _space_table(report) -> str:
    rows = [f"{'component':<12}{'bits':>12}"]
    rows += [f"{key:<12}{report[key]:>12}" for key in SPACE_KEYS]
    return "\n".join(rows) + "\n"


def cmd_gen(args) -> int:
    try:
        model = gen_model(args.n, args.k, args.t, _seed(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, format_model(model))
    return 0


def cmd_encode(args) -> int:
    model = parse_model(_read_text(args.model))
    graph = build_full(model, args.odd_mode).graph
    with open(args.out, "wb") as fh:
        fh.write(graph.to_bytes())
    report = graph.space_report()
    sys.stdout.write(_space_table(report))
    print(_stats_line(report))
    return 0


def _load(path: str) -> EncodedGraph:
    with open(path, "rb") as fh:
        return EncodedGraph.from_bytes(fh.read())


def _vertex(graph: EncodedGraph, text: str) -> int:
    try:
        return graph.vertex_of_original(int(text))
    except ValueError:
        raise UsageError(f"vertex id {text!r} is not an integer") from None


def cmd_query(args) -> int:
    graph = _load(args.blob)
    op, ids = args.op, args.ids
    want = {"adj": 2, "nbh": 1, "deg": 1}[op]
    if len(ids) != want:
        raise UsageError(f"{op} takes {want} vertex id(s)")
    vs = [_vertex(graph, x) for x in ids]
    if op == "adj":
        if vs[0] == vs[1]:
            raise UsageError("adj needs two distinct vertices")
        print("true" if graph.adjacency(*vs) else "false")
    elif op == "nbh":
        print(" ".join(str(x) for x in sorted(graph.original_id(v) for v in graph.neighbourhood(vs[0]))))
    else:
        print(graph.degree(vs[0]))
    return 0


def verify_model(model, odd_mode: str = "root-pair") -> Optional[str]:
    """Compare encoded queries with the oracle; return the first mismatch or None."""
    result = build_full(model, odd_mode)
    graph = EncodedGraph.from_bytes(result.graph.to_bytes())
    oracle = oracle_graph(model)
    new = result.new_of_orig
    n = model.n_vertices
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            got = graph.adjacency(new[a], new[b])
            if got != oracle.adj[a - 1][b - 1]:
                return f"adj {a} {b}: expected {str(oracle.adj[a - 1][b - 1]).lower()}, got {str(got).lower()}"
        got_n = sorted(graph.original_id(v) for v in graph.neighbourhood(new[a]))
        want_n = oracle.neighbours(a)
        if got_n != want_n:
            return f"nbh {a}: expected {want_n}, got {got_n}"
    return None


def cmd_verify(args) -> int:
    model = parse_model(_read_text(args.model))
    mismatch = verify_model(model, args.odd_mode)
    if mismatch is None:
        print(f"PASS n={model.n_vertices} k={model.k}")
        return 0
    print(f"FAIL {mismatch}")
    return 1


def cmd_stats(args) -> int:
    report = _load(args.blob).space_report()
    sys.stdout.write(_space_table(report))
    print(_stats_line(report))
    return 0


def cmd_lbcheck(args) -> int:
    try:
        rep = lb_check(args.m, args.k, args.dep, seed=_seed(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    noun = "structures" if args.dep == 1 else "pairs" if args.dep == 2 else "families"
    verdict = "all distinct" if rep.all_distinct else f"{rep.distinct} distinct"
    mode = "exhaustive" if rep.exhaustive else "sampled"
    print(f"{rep.count} {noun} checked ({mode}), {verdict}")
    if rep.witness:
        print(f"witness {rep.witness[0]} vs {rep.witness[1]}")
    print("m,k,count,distinct")
    print(rep.csv_row())
    return 0 if rep.all_distinct else 1


def cmd_bench(args) -> int:
    seed = _seed(args)
    for rep in range(args.repeat):
        model = gen_model(args.n, args.k, args.t, seed + rep)
        t0 = time.perf_counter()
        graph = build_full(model, args.odd_mode).graph
        t1 = time.perf_counter()
        pairs = 0
        for i in range(1, graph.n + 1):
            for j in range(i + 1, min(graph.n, i + args.span) + 1):
                graph.adjacency(i, j)
                pairs += 1
        t2 = time.perf_counter()
        for i in range(1, graph.n + 1):
            graph.neighbourhood(i)
        t3 = time.perf_counter()
        report = graph.space_report()
        print(
            f"bench seed={seed + rep} n={graph.n} k={graph.k} t={args.t} m_H={graph.m} "
            f"build_s={t1 - t0:.4f} adj_us={1e6 * (t2 - t1) / max(pairs, 1):.1f} "
            f"nbh_us={1e6 * (t3 - t2) / graph.n:.1f} total_bits={report['total']}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leafage", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random tree model")
    g.add_argument("-n", type=int, required=True, help="graph vertices")
    g.add_argument("-k", type=int, required=True, help="leaf bound per subtree")
    g.add_argument("-t", type=int, required=True, help="tree nodes")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", default=None)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("encode", help="encode a model file")
    e.add_argument("model")
    e.add_argument("-o", "--out", required=True)
    e.add_argument("--odd-mode", choices=ODD_MODES, default="root-pair")
    e.set_defaults(func=cmd_encode)

    q = sub.add_parser("query", help="query an encoded blob (original vertex ids)")
    q.add_argument("blob")
    q.add_argument("op", choices=("adj", "nbh", "deg"))
    q.add_argument("ids", nargs="+")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="check every query against the brute-force oracle")
    v.add_argument("model")
    v.add_argument("--odd-mode", choices=ODD_MODES, default="root-pair")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="print the space report of a blob")
    s.add_argument("blob")
    s.set_defaults(func=cmd_stats)

    lb = sub.add_parser("lbcheck", help="distinctness check of the lower-bound construction")
    lb.add_argument("-m", type=int, required=True)
    lb.add_argument("-k", type=int, required=True)
    lb.add_argument("--dep", type=int, default=1, help="free dependent vertices")
    lb.add_argument("--seed", type=int, default=0)
    lb.set_defaults(func=cmd_lbcheck)

    b = sub.add_parser("bench", help="time build and queries on generated models")
    b.add_argument("-n", type=int, default=1024)
    b.add_argument("-k", type=int, default=4)
    b.add_argument("-t", type=int, default=1024)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--span", type=int, default=16, help="adjacency partners per vertex")
    b.add_argument("--odd-mode", choices=ODD_MODES, default="root-pair")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ModelError, MalformedTreeError, FormatError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
