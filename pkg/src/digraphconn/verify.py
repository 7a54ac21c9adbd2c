"""Batteries of checks run by ``digraphconn verify``.

Each check returns a :class:`TheoremReport`.  ``fast`` keeps every search at
n <= 4 and runs the closed-form checks up to n = 10; ``full`` adds the
n = 5 and n = 6 searches under an explicit time budget.
"""

from __future__ import annotations

import numpy as np

from .builder import (build, predicted_char_poly, predicted_connectivity, predicted_in_degrees,
                      star_decomposition)
from .forests import count_forests_k, min_tree_count
from .graph import complement, in_degrees, laplacian, random_digraph, source_scc_count
from .search import (SearchOptions, TheoremReport, max_connectivity, verify_dense_theorem,
                     verify_sparse_theorem, verify_star_union_theorem)
from .spectra import (algebraic_connectivity, char_poly_exact, complement_spectrum, eigenvalues,
                      forest_counts, multiset_distance, zero_multiplicity)

DEFAULT_SEED = 20240917


def check_build_claims(n_max: int = 10) -> TheoremReport:
    """Closed-form spectrum, connectivity, degrees and star structure of every G(n, m)."""
    failures = []
    for n in range(2, n_max + 1):
        for m in range(n * (n - 1) + 1):
            g = build(n, m)
            if char_poly_exact(laplacian(g)) != predicted_char_poly(n, m):
                failures.append(("char_poly", n, m))
            if tuple(sorted(in_degrees(g))) != predicted_in_degrees(n, m):
                failures.append(("degrees", n, m))
            if star_decomposition(n, m).arcs(n) != g.arc_set():
                failures.append(("stars", n, m))
            if m >= n - 1 and abs(algebraic_connectivity(g) - predicted_connectivity(n, m)) > 1e-8:
                failures.append(("connectivity", n, m))
    return TheoremReport("build_claims", {"n_max": n_max}, not failures, {"failures": failures[:20]})


def check_searched_optimum(n: int, m: int, expected: float, tol: float,
                           options: SearchOptions | None = None) -> TheoremReport:
    res = max_connectivity(n, m, options)
    params = {"n": n, "m": m, "expected": expected}
    if not res.exhaustive:
        return TheoremReport("searched_optimum", params, None, res.report())
    return TheoremReport("searched_optimum", params, abs(res.best_value - expected) <= tol, res.report())


def check_random_lemmas(samples: int, n_max: int, seed: int) -> list[TheoremReport]:
    """Zero multiplicity, matrix-tree coefficients and complement spectra on random graphs."""
    rng = np.random.default_rng(seed)
    zero_fail, forest_fail, comp_fail = 0, 0, 0
    for _ in range(samples):
        n = int(rng.integers(2, n_max + 1))
        g = random_digraph(n, rng)
        if not zero_multiplicity(g) == source_scc_count(g) == min_tree_count(g):
            zero_fail += 1
        counts = forest_counts(g)
        if any(counts[k - 1] != count_forests_k(g, k) for k in range(1, n + 1)):
            forest_fail += 1
        mapped = complement_spectrum(eigenvalues(laplacian(g)))
        if multiset_distance(eigenvalues(laplacian(complement(g))), mapped) > 1e-6:
            comp_fail += 1
    params = {"samples": samples, "n_max": n_max, "seed": seed}
    return [
        TheoremReport("zero_multiplicity_lemma", params, zero_fail == 0, {"failures": zero_fail}),
        TheoremReport("matrix_tree_corollary", params, forest_fail == 0, {"failures": forest_fail}),
        TheoremReport("complement_lemma", params, comp_fail == 0, {"failures": comp_fail}),
    ]


def run_suite(level: str = "fast", seed: int = DEFAULT_SEED, workers: int = 1,
              budget: float | None = None) -> list[TheoremReport]:
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    opts = SearchOptions(workers=workers, budget=budget)
    reports = [check_build_claims(10)]
    reports += [verify_sparse_theorem(n, opts) for n in (2, 3, 4)]
    reports += [verify_dense_theorem(4, m, opts) for m in (9, 10, 11)]
    reports += [verify_star_union_theorem(n, l, options=opts) for n in (2, 3, 4) for l in range(1, n + 1)]
    reports += [verify_star_union_theorem(6, l, search=False) for l in range(1, 7)]
    reports.append(check_searched_optimum(4, 5, 1.5, 1e-3, opts))
    reports += check_random_lemmas(100, 5, seed)
    if level == "full":
        reports.append(verify_sparse_theorem(5, opts))
        reports += [verify_dense_theorem(5, m, opts) for m in range(16, 20)]
        reports += [verify_star_union_theorem(5, l, options=opts) for l in range(1, 6)]
        reports.append(check_searched_optimum(5, 9, 2.0, 1e-6, opts))
        reports.append(check_searched_optimum(5, 7, 1.5, 1e-3, opts))
        reports.append(check_searched_optimum(6, 8, 1.123, 1e-3, opts))
        reports.append(check_searched_optimum(6, 9, 1.5, 1e-3, opts))
        reports += check_random_lemmas(1000, 5, seed + 1)
    return reports
