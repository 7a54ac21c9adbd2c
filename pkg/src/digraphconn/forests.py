"""Brute-force spanning-forest enumeration for tiny graphs.

Nothing here touches linear algebra: forests are found by giving every
non-root vertex one incoming arc and discarding choices that close a
cycle.  These counts are the independent check on the characteristic
polynomial and principal-minor routines.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator

from .graph import DiGraph, laplacian
from .spectra import principal_minor

ORACLE_MAX_VERTICES = 6


class OracleCapError(ValueError):
    pass


@dataclass(frozen=True)
class ForestCertificate:
    root_set: frozenset[int]
    arc_subset: tuple[tuple[int, int], ...]
    tree_count: int


def _check_caps(g: DiGraph) -> None:
    if g.n > ORACLE_MAX_VERTICES:
        raise OracleCapError(f"forest enumeration is capped at n <= {ORACLE_MAX_VERTICES}, got n = {g.n}")


def _normalize_roots(g: DiGraph, roots: Iterable[int]) -> frozenset[int]:
    roots = list(roots)
    rs = frozenset(roots)
    if not rs or len(rs) != len(roots) or any(not 1 <= r <= g.n for r in rs):
        raise ValueError(f"invalid root set {roots!r} for a graph on {g.n} vertices")
    return rs


def _reaches_root(parent: dict[int, int], v: int, roots: frozenset[int]) -> bool:
    seen = set()
    while v not in roots:
        if v in seen:
            return False
        seen.add(v)
        v = parent[v]
    return True


def iter_forests(g: DiGraph, roots: Iterable[int]) -> Iterator[ForestCertificate]:
    """Every spanning directed forest of ``g`` whose trees are rooted exactly at ``roots``."""
    _check_caps(g)
    rs = _normalize_roots(g, roots)
    inn = g.in_neighbors()
    others = [v for v in range(1, g.n + 1) if v not in rs]
    for tails in product(*(inn[v] for v in others)):
        parent = dict(zip(others, tails))
        if all(_reaches_root(parent, v, rs) for v in others):
            yield ForestCertificate(rs, tuple(sorted((t, v) for v, t in parent.items())), len(rs))


def count_forests_rooted(g: DiGraph, roots: Iterable[int]) -> int:
    return sum(1 for _ in iter_forests(g, roots))


def rooted_count_with_minor(g: DiGraph, roots: Iterable[int]) -> tuple[int, int]:
    """Enumerated forest count next to the matching principal minor of the Laplacian."""
    rs = _normalize_roots(g, roots)
    return count_forests_rooted(g, rs), principal_minor(laplacian(g), rs)


def count_forests_k(g: DiGraph, k: int) -> int:
    _check_caps(g)
    if not 1 <= k <= g.n:
        raise ValueError(f"tree count must lie in 1..{g.n}, got {k}")
    return sum(count_forests_rooted(g, rs) for rs in combinations(range(1, g.n + 1), k))


def min_tree_count(g: DiGraph) -> int:
    _check_caps(g)
    for k in range(1, g.n + 1):
        for rs in combinations(range(1, g.n + 1), k):
            if next(iter_forests(g, rs), None) is not None:
                return k
    raise AssertionError("the arcless forest always exists")
