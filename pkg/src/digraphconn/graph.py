"""Simple directed graphs on vertices 1..n and their in-degree Laplacians.

Graphs are immutable values.  Arcs are stored as a sorted tuple of
``(tail, head)`` pairs so that two graphs with the same arc set compare
(and hash) equal.  An arc ``(j, i)`` means information flows from ``j``
to ``i``; it contributes to the in-degree of ``i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_VERTICES = 64


class GraphError(ValueError):
    """Base class for invalid graph construction or operations."""


class VertexRangeError(GraphError):
    pass


class SelfArcError(GraphError):
    pass


class DuplicateArcError(GraphError):
    pass


class VertexCountMismatch(GraphError):
    pass


Arc = tuple[int, int]


@dataclass(frozen=True)
class DiGraph:
    n: int
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        if self.n > MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} exceeds the cap of {MAX_VERTICES}")
        arcs = tuple(sorted((int(t), int(h)) for t, h in self.arcs))
        for t, h in arcs:
            _check_arc(self.n, t, h)
        for a, b in zip(arcs, arcs[1:]):
            if a == b:
                raise DuplicateArcError(f"duplicate arc {a}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "arcs", arcs)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    def adjacency(self) -> np.ndarray:
        """0/1 matrix with ``A[i-1, j-1] = 1`` iff ``(j, i)`` is an arc."""
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for t, h in self.arcs:
            A[h - 1, t - 1] = 1
        return A

    def in_neighbors(self) -> list[list[int]]:
        """``in_neighbors()[i]`` lists the tails of arcs into vertex ``i`` (index 0 unused)."""
        nbrs: list[list[int]] = [[] for _ in range(self.n + 1)]
        for t, h in self.arcs:
            nbrs[h].append(t)
        return nbrs

    def out_neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n + 1)]
        for t, h in self.arcs:
            nbrs[t].append(h)
        return nbrs


def _check_arc(n: int, tail: int, head: int) -> None:
    if not (1 <= tail <= n and 1 <= head <= n):
        raise VertexRangeError(f"arc ({tail}, {head}) has an endpoint outside 1..{n}")
    if tail == head:
        raise SelfArcError(f"self-arc at vertex {tail}")


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of exact Python integers, stored row-major."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError("IntMatrix must be square and non-empty")
        object.__setattr__(self, "entries", rows)

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def to_numpy(self, dtype=float) -> np.ndarray:
        return np.array(self.entries, dtype=dtype)

    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(self.order))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))


def new_graph(n: int) -> DiGraph:
    return DiGraph(n)


def from_arcs(n: int, arcs: Iterable[Arc]) -> DiGraph:
    return DiGraph(n, tuple(arcs))


def add_arc(g: DiGraph, tail: int, head: int) -> DiGraph:
    _check_arc(g.n, tail, head)
    if (tail, head) in g.arc_set():
        raise DuplicateArcError(f"arc ({tail}, {head}) already present")
    return DiGraph(g.n, g.arcs + ((tail, head),))


def in_degrees(g: DiGraph) -> tuple[int, ...]:
    deg = [0] * g.n
    for _, h in g.arcs:
        deg[h - 1] += 1
    return tuple(deg)


def out_degrees(g: DiGraph) -> tuple[int, ...]:
    deg = [0] * g.n
    for t, _ in g.arcs:
        deg[t - 1] += 1
    return tuple(deg)


def laplacian(g: DiGraph) -> IntMatrix:
    """In-degree Laplacian ``D - A``; every row sums to zero."""
    rows = [[0] * g.n for _ in range(g.n)]
    for t, h in g.arcs:
        rows[h - 1][t - 1] -= 1
        rows[h - 1][h - 1] += 1
    return IntMatrix.from_rows(rows)


def complete_graph(n: int) -> DiGraph:
    return DiGraph(n, tuple((t, h) for t in range(1, n + 1) for h in range(1, n + 1) if t != h))


def star(n: int, root: int) -> DiGraph:
    """The n-vertex directed star with arcs from ``root`` to every other vertex."""
    return DiGraph(n, tuple((root, h) for h in range(1, n + 1) if h != root))


def complement(g: DiGraph) -> DiGraph:
    present = g.arc_set()
    return DiGraph(g.n, tuple(a for a in complete_graph(g.n).arcs if a not in present))


def transpose(g: DiGraph) -> DiGraph:
    return DiGraph(g.n, tuple((h, t) for t, h in g.arcs))


def union(g1: DiGraph, g2: DiGraph) -> DiGraph:
    if g1.n != g2.n:
        raise VertexCountMismatch(f"cannot unite graphs on {g1.n} and {g2.n} vertices")
    return DiGraph(g1.n, tuple(g1.arc_set() | g2.arc_set()))


def induced_subgraph(g: DiGraph, k: int) -> DiGraph:
    """Subgraph induced on vertices 1..k."""
    return DiGraph(k, tuple((t, h) for t, h in g.arcs if t <= k and h <= k))


def strongly_connected_components(g: DiGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative.  Components come out in reverse topological order."""
    out = g.out_neighbors()
    index = [0] * (g.n + 1)
    low = [0] * (g.n + 1)
    visited = [False] * (g.n + 1)
    on_stack = [False] * (g.n + 1)
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 1

    for start in range(1, g.n + 1):
        if visited[start]:
            continue
        work = [(start, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                visited[v] = True
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(out[v])):
                w = out[v][k]
                if not visited[w]:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def source_scc_count(g: DiGraph) -> int:
    """Number of strongly connected components that no arc enters from outside.

    This is the fewest trees any spanning directed forest of ``g`` can have.
    """
    comp_of = [0] * (g.n + 1)
    comps = strongly_connected_components(g)
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    entered = [False] * len(comps)
    for t, h in g.arcs:
        if comp_of[t] != comp_of[h]:
            entered[comp_of[h]] = True
    return entered.count(False)


def is_rooted(g: DiGraph) -> bool:
    return source_scc_count(g) == 1


def is_acyclic(g: DiGraph) -> bool:
    return len(strongly_connected_components(g)) == g.n


def weak_components(g: DiGraph) -> list[list[int]]:
    parent = list(range(g.n + 1))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for t, h in g.arcs:
        parent[find(t)] = find(h)
    groups: dict[int, list[int]] = {}
    for v in range(1, g.n + 1):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def directed_forest_tree_count(g: DiGraph) -> int | None:
    """Tree count if ``g`` is a spanning directed forest, else ``None``.

    Checked structurally: no vertex has two incoming arcs, no directed
    cycle, and each weakly connected component on ``c`` vertices carries
    exactly ``c - 1`` arcs.
    """
    if any(d > 1 for d in in_degrees(g)) or not is_acyclic(g):
        return None
    comps = weak_components(g)
    comp_of = {v: i for i, comp in enumerate(comps) for v in comp}
    arc_count = [0] * len(comps)
    for t, _ in g.arcs:
        arc_count[comp_of[t]] += 1
    if any(arc_count[i] != len(comp) - 1 for i, comp in enumerate(comps)):
        return None
    return len(comps)


def is_directed_tree(g: DiGraph) -> bool:
    return directed_forest_tree_count(g) == 1


# serialization

def to_dict(g: DiGraph) -> dict:
    return {"n": g.n, "arcs": [[t, h] for t, h in g.arcs]}


def from_dict(data: dict) -> DiGraph:
    try:
        n = data["n"]
        arcs = [tuple(a) for a in data["arcs"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from None
    if any(len(a) != 2 for a in arcs):
        raise GraphError("every arc must be a [tail, head] pair")
    return DiGraph(n, tuple(arcs))


def to_json(g: DiGraph) -> str:
    return json.dumps(to_dict(g))


def from_json(text: str) -> DiGraph:
    return from_dict(json.loads(text))


def to_dot(g: DiGraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    lines += [f'  "{v}";' for v in range(1, g.n + 1)]
    lines += [f'  "{t}" -> "{h}";' for t, h in g.arcs]
    lines.append("}")
    return "\n".join(lines) + "\n"


def random_digraph(n: int, rng: np.random.Generator, p: float | None = None) -> DiGraph:
    """Each of the n(n-1) arcs present independently with probability ``p`` (random if None)."""
    if p is None:
        p = rng.uniform()
    arcs = [(t, h) for t in range(1, n + 1) for h in range(1, n + 1)
            if t != h and rng.uniform() < p]
    return DiGraph(n, tuple(arcs))
