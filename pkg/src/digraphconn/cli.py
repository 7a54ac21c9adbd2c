"""Command-line front end: ``digraphconn <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import graph as gc
from .builder import BuildParams, build, predicted_connectivity, predicted_spectrum
from .consensus import estimate_rate, max_stable_dt, simulate
from .forests import count_forests_k, count_forests_rooted, iter_forests
from .search import SearchOptions, default_workers, max_connectivity
from .spectra import (algebraic_connectivity, char_poly_exact, eigenvalues, exact_spectrum,
                      normalized_spread, EXACT_MAX_ORDER)
from .verify import DEFAULT_SEED, run_suite


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _load_graph(path: str) -> gc.DiGraph:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise CliError("io", str(exc)) from None
    try:
        return gc.from_json(text)
    except json.JSONDecodeError as exc:
        raise CliError("parse", f"{path}: {exc}") from None


def _pairs(spec) -> list[list[float]]:
    return [[v.real, v.imag] for v in spec]


def _spectrum_of(g: gc.DiGraph):
    L = gc.laplacian(g)
    return exact_spectrum(L) if g.n <= EXACT_MAX_ORDER else eigenvalues(L)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _graph_source(args) -> gc.DiGraph:
    if getattr(args, "graph", None):
        return _load_graph(args.graph)
    if args.n is None or args.m is None:
        raise CliError("usage", "give either --graph FILE or both --n and --m")
    return build(args.n, args.m)


def cmd_build(args):
    params = BuildParams(args.n, args.m)
    g = build(args.n, args.m)
    if args.output == "dot":
        sys.stdout.write(gc.to_dot(g))
        return 0
    out = gc.to_dict(g)
    out.update({
        "kappa": params.kappa,
        "nu": params.nu,
        "predicted_connectivity": predicted_connectivity(args.n, args.m),
        "predicted_spectrum": _pairs(predicted_spectrum(args.n, args.m)),
        "measured_spectrum": _pairs(_spectrum_of(g)),
    })
    if args.output == "table":
        for key in ("n", "kappa", "nu", "predicted_connectivity"):
            print(f"{key:24s}{out[key]}")
        print(f"{'arcs':24s}{' '.join(f'{t}->{h}' for t, h in g.arcs)}")
        return 0
    _emit(out)
    return 0


def cmd_spectrum(args):
    g = _load_graph(args.graph)
    if args.charpoly:
        sys.stdout.write(char_poly_exact(gc.laplacian(g)).to_json() + "\n")
        return 0
    spec = eigenvalues(gc.laplacian(g)) if args.numeric else _spectrum_of(g)
    sys.stdout.write(spec.to_json() + "\n")
    return 0


def cmd_connectivity(args):
    g = _load_graph(args.graph)
    if g.n < 2:
        raise CliError("domain", "algebraic connectivity needs at least 2 vertices")
    print(repr(algebraic_connectivity(g)))
    return 0


def cmd_search(args):
    if args.n < 2 or not 0 <= args.m <= args.n * (args.n - 1):
        raise CliError("domain", f"need n >= 2 and 0 <= m <= n(n-1); got n={args.n}, m={args.m}")
    opts = SearchOptions(workers=args.workers or default_workers(), budget=args.budget,
                         prune=not args.no_prune, witness_out=args.witness_out)
    _emit(max_connectivity(args.n, args.m, opts).report())
    return 0


def cmd_verify(args):
    reports = run_suite(args.level, seed=args.seed, workers=args.workers or default_workers(),
                        budget=args.budget)
    for r in reports:
        print(r.line())
    failed = [r for r in reports if r.passed is False]
    skipped = [r for r in reports if r.passed is None]
    print(f"{len(reports) - len(failed) - len(skipped)} passed, {len(failed)} failed, {len(skipped)} skipped")
    return 1 if failed else 0


def cmd_simulate(args):
    g = _load_graph(args.graph)
    rng = np.random.default_rng(args.seed)
    x0 = rng.uniform(size=g.n)
    dt = args.dt if args.dt is not None else max_stable_dt(g)
    trace = simulate(g, x0, dt, args.t_end)
    if args.csv:
        if args.csv == "-":
            trace.write_csv(sys.stdout)
            return 0
        trace.write_csv(args.csv)
    summary = {"final_disagreement": float(trace.disagreement[-1]),
               "consensus_value": trace.consensus_value,
               "algebraic_connectivity": algebraic_connectivity(g) if g.n >= 2 else None}
    try:
        summary["estimated_rate"] = estimate_rate(trace)
    except ValueError:
        summary["estimated_rate"] = None
    _emit(summary)
    return 0


def cmd_forests(args):
    g = _load_graph(args.graph)
    if args.roots:
        roots = [int(v) for v in args.roots.split(",")]
        out = {"roots": roots, "count": count_forests_rooted(g, roots)}
        if args.verbose:
            out["forests"] = [[list(a) for a in f.arc_subset] for f in iter_forests(g, roots)]
    elif args.k:
        out = {"k": args.k, "count": count_forests_k(g, args.k)}
    else:
        out = {"counts": {k: count_forests_k(g, k) for k in range(1, g.n + 1)}}
    _emit(out)
    return 0


def cmd_spread(args):
    g = _graph_source(args)
    if g.m == 0:
        raise CliError("domain", "normalized spread needs at least one arc")
    sigma2, score = normalized_spread(_spectrum_of(g), g.m)
    _emit({"n": g.n, "m": g.m, "sigma2": sigma2, "score": score})
    return 0


def cmd_export(args):
    g = _graph_source(args)
    sys.stdout.write(gc.to_dot(g) if args.format == "dot" else gc.to_json(g) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="digraphconn",
                                description="Digraphs with maximal algebraic connectivity.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build", help="construct G(n, m)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--output", choices=["json", "dot", "table"], default="json")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("spectrum", help="Laplacian spectrum of a graph file")
    s.add_argument("--graph", required=True, help="graph JSON file, or - for stdin")
    s.add_argument("--numeric", action="store_true", help="LAPACK eigenvalues instead of the exact route")
    s.add_argument("--charpoly", action="store_true", help="print exact characteristic polynomial")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("connectivity", help="algebraic connectivity of a graph file")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_connectivity)

    s = sub.add_parser("search", help="exhaustive search over all (n, m) digraphs")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
    s.add_argument("--no-prune", action="store_true")
    s.add_argument("--witness-out", default=None, help="write every witness as JSON lines")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", help="run the theorem checks")
    s.add_argument("--level", choices=["fast", "full"], default="fast")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--budget", type=float, default=None, help="per-search wall-clock seconds")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="integrate dx/dt = -Lx from a random start")
    s.add_argument("--graph", required=True)
    s.add_argument("--t-end", type=float, required=True)
    s.add_argument("--dt", type=float, default=None, help="default: largest stable step")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--csv", default=None, help="write the trace as CSV (- for stdout)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("forests", help="brute-force spanning forest counts")
    s.add_argument("--graph", required=True)
    s.add_argument("--roots", default=None, help="comma-separated root set, e.g. 1,2")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_forests)

    for name, func in (("spread", cmd_spread), ("export", cmd_export)):
        s = sub.add_parser(name)
        s.add_argument("--graph", default=None)
        s.add_argument("--n", type=int, default=None)
        s.add_argument("--m", type=int, default=None)
        if name == "export":
            s.add_argument("--format", choices=["dot", "json"], default="dot")
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        kind, msg = exc.kind, str(exc)
    except ValueError as exc:
        kind, msg = type(exc).__name__, str(exc)
    sys.stderr.write(json.dumps({"error": kind, "message": msg}) + "\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
