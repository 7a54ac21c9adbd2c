"""Incremental construction of almost-regular digraphs G(n, m).

Arc number ``i`` (1-based) joins tail ``ceil(i / (n-1))`` to head
``n - ((i-1) mod n)``.  G(n, m) is the graph on the first ``m`` arcs, so
the graphs for a fixed ``n`` are nested as ``m`` grows.  All closed forms
here (degrees, star structure, spectrum) are predictions that the tests
check against the constructed graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import DiGraph
from .spectra import CharPoly, Spectrum


class BuildError(ValueError):
    pass


@dataclass(frozen=True)
class BuildParams:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 2:
            raise BuildError(f"construction needs n >= 2, got {self.n}")
        if not 0 <= self.m <= self.n * (self.n - 1):
            raise BuildError(f"m must lie in 0..{self.n * (self.n - 1)} for n = {self.n}, got {self.m}")

    @property
    def kappa(self) -> int:
        return self.m // (self.n - 1)

    @property
    def nu(self) -> int:
        return self.m // self.n


def arc_for_index(n: int, i: int) -> tuple[int, int]:
    if n < 2:
        raise BuildError(f"construction needs n >= 2, got {n}")
    if not 1 <= i <= n * (n - 1):
        raise BuildError(f"arc index must lie in 1..{n * (n - 1)}, got {i}")
    return -(-i // (n - 1)), n - ((i - 1) % n)


def build_sequence(n: int, m: int):
    """Yield the first ``m`` arcs in construction order."""
    BuildParams(n, m)
    for i in range(1, m + 1):
        yield arc_for_index(n, i)


def build(n: int, m: int) -> DiGraph:
    return DiGraph(n, tuple(build_sequence(n, m)))


def predicted_in_degrees(n: int, m: int) -> tuple[int, ...]:
    """Sorted in-degree sequence: ``n(nu+1) - m`` copies of nu, the rest nu+1."""
    nu = BuildParams(n, m).nu
    low = n * (nu + 1) - m
    return (nu,) * low + (nu + 1,) * (n - low)


def _spectrum_multiplicities(n: int, m: int) -> tuple[int, int, int]:
    k = BuildParams(n, m).kappa
    return k, (k + 1) * (n - 1) - m, m - k * (n - 1)


def predicted_spectrum(n: int, m: int) -> Spectrum:
    if m == 0:
        BuildParams(n, m)
        return Spectrum((0j,) * n)
    k, mult_k, mult_k1 = _spectrum_multiplicities(n, m)
    return Spectrum((0j,) + (complex(k),) * mult_k + (complex(k + 1),) * mult_k1)


def predicted_char_poly(n: int, m: int) -> CharPoly:
    """``x (x - k)^((k+1)(n-1)-m) (x - k - 1)^(m - k(n-1))`` expanded, ``k = floor(m/(n-1))``."""
    k, mult_k, mult_k1 = _spectrum_multiplicities(n, m)
    return CharPoly.from_roots([0] + [k] * mult_k + [k + 1] * mult_k1)


def predicted_connectivity(n: int, m: int) -> int:
    return BuildParams(n, m).kappa


@dataclass(frozen=True)
class StarDecomposition:
    full_star_roots: tuple[int, ...]
    partial_star_root: int | None
    partial_star_size: int

    def arcs(self, n: int) -> set[tuple[int, int]]:
        """Arc set of the union these stars describe."""
        out = {(r, h) for r in self.full_star_roots for h in range(1, n + 1) if h != r}
        if self.partial_star_root is not None and self.partial_star_size > 1:
            k = len(self.full_star_roots)
            # leaves run k, k-1, ..., 1 and then wrap around to n, n-1, ...
            leaves = [k + 1 - j if j <= k else n + k + 1 - j
                      for j in range(1, self.partial_star_size)]
            out |= {(self.partial_star_root, h) for h in leaves}
        return out


def star_decomposition(n: int, m: int) -> StarDecomposition:
    """κ full stars rooted at 1..κ plus a star on ``m - κ(n-1) + 1`` vertices rooted at κ+1.

    When ``m = n(n-1)`` there is no vertex κ+1 and the partial root is ``None``.
    """
    k = BuildParams(n, m).kappa
    size = m - k * (n - 1) + 1
    root = k + 1 if k < n else None
    return StarDecomposition(tuple(range(1, k + 1)), root, size)


def corollary_conditions(n1: int, m1: int, n2: int, m2: int) -> bool:
    """Sufficient conditions for G(n1, m1) to be a subgraph of G(n2, m2)."""
    BuildParams(n1, m1)
    BuildParams(n2, m2)
    q1, r1 = divmod(m1, n1)
    q2, r2 = divmod(m2, n2)
    return n1 <= n2 and q1 <= q2 and n1 - r1 >= n2 - r2


def nesting_holds(n1: int, m1: int, n2: int, m2: int) -> bool:
    """Whether nesting of G(n1, m1) in G(n2, m2) is guaranteed.

    True under the quotient/remainder conditions, and also for equal vertex
    counts with ``m1 <= m2``, where nesting follows from the prefix property.
    """
    if n1 == n2 and m1 <= m2:
        BuildParams(n1, m1)
        BuildParams(n2, m2)
        return True
    return corollary_conditions(n1, m1, n2, m2)


def is_subgraph(g1: DiGraph, g2: DiGraph) -> bool:
    return g1.n <= g2.n and g1.arc_set() <= g2.arc_set()
