"""Exhaustive search for the largest algebraic connectivity over all
simple digraphs with ``n`` labeled vertices and ``m`` arcs.

The search walks the C(n(n-1), m) arc subsets in lexicographic order.
Subsets are materialized in blocks sharing a common prefix, Laplacians
are assembled as one stacked array per block and screened with a batched
LAPACK eigenvalue call.  Graphs that screen within a small window of the
running maximum are kept as candidates; at the end every candidate is
re-evaluated through the exact characteristic polynomial, and ties are
clustered on those refined values.  The reduce step depends only on the
candidate set, so the result does not depend on the worker count.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, islice
from math import comb
from typing import Iterator

import numpy as np

from .graph import (DiGraph, complement, complete_graph, directed_forest_tree_count,
                    is_rooted, star, union)
from .spectra import algebraic_connectivity

TIE_TOL = 1e-6
WITNESS_CAP = 10_000
SCREEN_WINDOW = 1e-3
BLOCK_SIZE = 40_000
BOUND_TOL = 1e-8


@dataclass(frozen=True)
class SearchOptions:
    workers: int = 1
    budget: float | None = None  # wall-clock seconds
    prune: bool = True
    tie_tol: float = TIE_TOL
    witness_cap: int = WITNESS_CAP
    witness_out: str | None = None
    block_size: int = BLOCK_SIZE


@dataclass
class SearchResult:
    n: int
    m: int
    best_value: float
    witnesses: list[DiGraph]
    witness_count: int
    graphs_examined: int
    graphs_pruned: int
    exhaustive: bool
    wall_time: float
    witnesses_truncated: bool = False

    def report(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "best_value": self.best_value,
            "witness_count": self.witness_count,
            "graphs_examined": self.graphs_examined,
            "graphs_pruned": self.graphs_pruned,
            "exhaustive": self.exhaustive,
            "seconds": round(self.wall_time, 3),
        }


def arc_slots(n: int) -> tuple[tuple[int, int], ...]:
    """All n(n-1) possible arcs in lexicographic order; a graph is a subset of slot indices."""
    return complete_graph(n).arcs


def enumerate_graphs(n: int, m: int, start: int = 0, stop: int | None = None) -> Iterator[DiGraph]:
    """Graphs with ranks ``start <= r < stop`` in lexicographic combination order."""
    slots = arc_slots(n)
    for combo in islice(combinations(range(len(slots)), m), start, stop):
        yield DiGraph(n, tuple(slots[s] for s in combo))


def graph_count(n: int, m: int) -> int:
    return comb(n * (n - 1), m)


# block machinery

@dataclass(frozen=True)
class _Block:
    prefix: tuple[int, ...]
    start: int      # first slot available to the suffix
    remaining: int  # suffix length
    rank: int       # lexicographic rank of the first combination in the block
    count: int


def _blocks(N: int, m: int, max_block: int) -> list[_Block]:
    out: list[_Block] = []
    rank = 0

    def split(prefix, start, remaining):
        nonlocal rank
        count = comb(N - start, remaining)
        if count <= max_block or remaining == 0:
            out.append(_Block(prefix, start, remaining, rank, count))
            rank += count
            return
        for first in range(start, N - remaining + 1):
            split(prefix + (first,), first + 1, remaining - 1)

    split((), 0, m)
    return out


@lru_cache(maxsize=64)
def _suffix_table(k: int, r: int) -> np.ndarray:
    if r == 0:
        return np.zeros((1, 0), dtype=np.int16)
    flat = np.fromiter((s for c in combinations(range(k), r) for s in c), dtype=np.int16,
                       count=comb(k, r) * r)
    return flat.reshape(-1, r)


def _block_combos(block: _Block, N: int) -> np.ndarray:
    suffix = _suffix_table(N - block.start, block.remaining) + block.start
    if not block.prefix:
        return suffix
    prefix = np.broadcast_to(np.array(block.prefix, dtype=np.int16), (len(suffix), len(block.prefix)))
    return np.hstack([prefix, suffix])


def _laplacian_batch(combos: np.ndarray, n: int, tails: np.ndarray, heads: np.ndarray):
    B, m = combos.shape
    L = np.zeros((B, n * n))
    rows = np.repeat(np.arange(B), m)
    flat = (heads[combos] * n + tails[combos]).ravel()
    L[rows, flat] = -1.0
    L = L.reshape(B, n, n)
    deg = -L.sum(axis=2)
    idx = np.arange(n)
    L[:, idx, idx] = deg
    return L, deg


@dataclass
class _Partial:
    best: float = -np.inf
    ranks: list = field(default_factory=list)
    combos: list = field(default_factory=list)
    values: list = field(default_factory=list)
    examined: int = 0
    pruned: int = 0
    complete: bool = True


def _window(best: float) -> float:
    return SCREEN_WINDOW * max(1.0, abs(best))


def _run_blocks(n: int, m: int, blocks: list[_Block], prune: bool, deadline: float | None) -> _Partial:
    slots = arc_slots(n)
    tails = np.array([t - 1 for t, _ in slots])
    heads = np.array([h - 1 for _, h in slots])
    N = len(slots)
    part = _Partial()
    for block in blocks:
        if deadline is not None and time.monotonic() > deadline:
            part.complete = False
            break
        combos = _block_combos(block, N)
        ranks = np.arange(block.rank, block.rank + block.count)
        L, deg = _laplacian_batch(combos, n, tails, heads)
        if prune and part.best > 0:
            # two vertices without in-arcs cannot both be reached from one root
            keep = (deg == 0).sum(axis=1) < 2
            part.pruned += int(len(keep) - keep.sum())
            L, combos, ranks = L[keep], combos[keep], ranks[keep]
        if len(L) == 0:
            continue
        part.examined += len(L)
        a = np.sort(np.linalg.eigvals(L).real, axis=1)[:, 1]
        block_best = float(a.max())
        if block_best > part.best:
            part.best = block_best
            floor = part.best - _window(part.best)
            kept = [i for i, v in enumerate(part.values) if v >= floor]
            part.ranks = [part.ranks[i] for i in kept]
            part.combos = [part.combos[i] for i in kept]
            part.values = [part.values[i] for i in kept]
        sel = np.nonzero(a >= part.best - _window(part.best))[0]
        part.ranks.extend(ranks[sel].tolist())
        part.combos.extend(combos[sel])
        part.values.extend(a[sel].tolist())
    return part


def _worker(args):
    return _run_blocks(*args)


def max_connectivity(n: int, m: int, options: SearchOptions | None = None, **kwargs) -> SearchResult:
    """Largest algebraic connectivity over all n-vertex, m-arc simple digraphs."""
    opts = options or SearchOptions(**kwargs)
    if n < 2 or not 0 <= m <= n * (n - 1):
        raise ValueError(f"need n >= 2 and 0 <= m <= n(n-1); got n={n}, m={m}")
    t0 = time.monotonic()
    deadline = t0 + opts.budget if opts.budget is not None else None
    N = n * (n - 1)
    blocks = _blocks(N, m, opts.block_size)

    workers = max(1, opts.workers)
    if workers == 1 or len(blocks) == 1:
        parts = [_run_blocks(n, m, blocks, opts.prune, deadline)]
    else:
        chunks = np.array_split(np.arange(len(blocks)), min(len(blocks), workers * 4))
        jobs = [(n, m, [blocks[i] for i in c], opts.prune, deadline) for c in chunks if len(c)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_worker, jobs))

    best_numeric = max(p.best for p in parts)
    floor = best_numeric - _window(best_numeric)
    cand = sorted((r, c) for p in parts for r, c, v in zip(p.ranks, p.combos, p.values) if v >= floor)
    slots = arc_slots(n)

    def as_graph(combo):
        return DiGraph(n, tuple(slots[s] for s in combo))

    if not cand:
        best = float("nan")
        winners = []
    elif best_numeric < opts.tie_tol:
        # nothing rooted: every graph has a zero eigenvalue of multiplicity >= 2
        best = 0.0
        winners = [c for _, c in cand]
    else:
        refined = [(algebraic_connectivity(as_graph(c), method="exact"), c) for _, c in cand]
        best = max(v for v, _ in refined)
        tol = opts.tie_tol * max(1.0, abs(best))
        winners = [c for v, c in refined if abs(v - best) <= tol]

    if opts.witness_out:
        with open(opts.witness_out, "w", encoding="utf-8") as fh:
            for c in winners:
                fh.write(json.dumps({"n": n, "arcs": [list(slots[s]) for s in c]}) + "\n")

    return SearchResult(
        n=n,
        m=m,
        best_value=best,
        witnesses=[as_graph(c) for c in winners[:opts.witness_cap]],
        witness_count=len(winners),
        graphs_examined=sum(p.examined for p in parts),
        graphs_pruned=sum(p.pruned for p in parts),
        exhaustive=all(p.complete for p in parts),
        wall_time=time.monotonic() - t0,
        witnesses_truncated=len(winners) > opts.witness_cap,
    )


# theorem checks

@dataclass
class TheoremReport:
    name: str
    params: dict
    passed: bool | None  # None when skipped (budget exhausted)
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"[{status}] {self.name}({args})"


def _skipped(name, params, res):
    return TheoremReport(name, params, None, {"reason": "search budget exhausted", **res.report()})


def labeled_directed_trees(n: int) -> set[DiGraph]:
    """All directed trees on vertices 1..n, filtered from every (n-1)-arc graph."""
    return {g for g in enumerate_graphs(n, n - 1) if is_rooted(g)}


def verify_sparse_theorem(n: int, options: SearchOptions | None = None) -> TheoremReport:
    """With n-1 arcs the optimum is 1, attained exactly by directed trees."""
    params = {"n": n}
    res = max_connectivity(n, n - 1, options)
    if not res.exhaustive:
        return _skipped("sparse_theorem", params, res)
    trees = labeled_directed_trees(n)
    witnesses = set(res.witnesses)
    ok_value = abs(res.best_value - 1.0) <= BOUND_TOL
    ok_set = not res.witnesses_truncated and witnesses == trees
    ok_count = len(trees) == n ** (n - 1)
    return TheoremReport("sparse_theorem", params, ok_value and ok_set and ok_count, {
        "best_value": res.best_value, "witness_count": res.witness_count,
        "tree_count": len(trees), "cayley_count": n ** (n - 1)})


def forest_complement_graphs(n: int, m: int) -> set[DiGraph]:
    """Graphs with m arcs whose complement is a directed forest of m - n(n-2) trees."""
    trees = m - n * (n - 2)
    return {complement(f) for f in enumerate_graphs(n, n * (n - 1) - m)
            if directed_forest_tree_count(f) == trees}


def verify_dense_theorem(n: int, m: int, options: SearchOptions | None = None) -> TheoremReport:
    """For (n-1)^2 <= m < n(n-1), the optimum is n-1, attained exactly when the complement is a forest."""
    if not (n - 1) ** 2 <= m < n * (n - 1):
        raise ValueError(f"dense regime needs (n-1)^2 <= m < n(n-1); got n={n}, m={m}")
    params = {"n": n, "m": m}
    res = max_connectivity(n, m, options)
    if not res.exhaustive:
        return _skipped("dense_theorem", params, res)
    trees = m - n * (n - 2)
    expected = forest_complement_graphs(n, m)
    witness_ok = all(directed_forest_tree_count(complement(g)) == trees for g in res.witnesses)
    attain_ok = all(abs(algebraic_connectivity(g) - (n - 1)) <= BOUND_TOL for g in expected)
    value_ok = abs(res.best_value - (n - 1)) <= BOUND_TOL
    set_ok = not res.witnesses_truncated and set(res.witnesses) == expected
    return TheoremReport("dense_theorem", params, value_ok and witness_ok and attain_ok and set_ok, {
        "best_value": res.best_value, "witness_count": res.witness_count,
        "forest_complements": len(expected)})


def star_unions(n: int, l: int) -> list[DiGraph]:
    """Every union of ``l`` full stars with distinct roots."""
    out = []
    for roots in combinations(range(1, n + 1), l):
        g = DiGraph(n)
        for r in roots:
            g = union(g, star(n, r))
        out.append(g)
    return out


def verify_star_union_theorem(n: int, l: int, search: bool = True,
                              options: SearchOptions | None = None) -> TheoremReport:
    """Unions of l distinct-rooted full stars reach l, the optimum for m = l(n-1)."""
    if not 1 <= l <= n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    params = {"n": n, "l": l}
    unions = star_unions(n, l)
    values = [algebraic_connectivity(g) for g in unions]
    attain_ok = all(abs(v - l) <= BOUND_TOL for v in values)
    details = {"unions_checked": len(unions), "union_min": min(values), "union_max": max(values)}
    if not search:
        return TheoremReport("star_union_theorem", params, attain_ok, details)
    res = max_connectivity(n, l * (n - 1), options)
    if not res.exhaustive:
        return _skipped("star_union_theorem", params, res)
    details["best_value"] = res.best_value
    return TheoremReport("star_union_theorem", params,
                         attain_ok and abs(res.best_value - l) <= BOUND_TOL, details)


def default_workers() -> int:
    return os.cpu_count() or 1
