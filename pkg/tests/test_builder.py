import pytest
import sympy

from digraphconn.builder import (BuildError, BuildParams, arc_for_index, build, build_sequence,
                                 corollary_conditions, is_subgraph, nesting_holds,
                                 predicted_char_poly, predicted_connectivity, predicted_in_degrees,
                                 predicted_spectrum, star_decomposition)
from digraphconn.graph import (complete_graph, in_degrees, induced_subgraph, laplacian, new_graph,
                               star)
from digraphconn.spectra import (Spectrum, algebraic_connectivity, char_poly_exact, eigenvalues,
                                 multiset_distance)


def all_params(n_max):
    for n in range(2, n_max + 1):
        for m in range(n * (n - 1) + 1):
            yield n, m


def test_arc_for_index_examples():
    assert arc_for_index(4, 1) == (1, 4)
    assert arc_for_index(4, 4) == (2, 1)
    assert arc_for_index(5, 9) == (3, 2)
    with pytest.raises(BuildError):
        arc_for_index(4, 13)
    with pytest.raises(BuildError):
        arc_for_index(4, 0)


def test_build_examples():
    assert build(4, 3) == star(4, 1)
    for n in range(2, 8):
        assert build(n, n * (n - 1)) == complete_graph(n)
        assert build(n, 0) == new_graph(n)
    stars = set(star(5, 1).arcs) | set(star(5, 2).arcs) | {(3, 2)}
    assert build(5, 9).arc_set() == stars


def test_build_rejects_bad_params():
    with pytest.raises(BuildError):
        build(1, 0)
    with pytest.raises(BuildError):
        build(4, 13)
    with pytest.raises(BuildError):
        build(4, -1)


def test_build_params_floors():
    for n, m in all_params(12):
        p = BuildParams(n, m)
        assert 0 <= p.kappa <= n
        if m >= 1:
            assert p.kappa - p.nu in (0, 1)


def test_arcs_are_distinct_and_exhaustive():
    for n in range(2, 13):
        arcs = [arc_for_index(n, i) for i in range(1, n * (n - 1) + 1)]
        assert len(set(arcs)) == n * (n - 1)
        assert all(t != h and 1 <= t <= n and 1 <= h <= n for t, h in arcs)


def test_prefix_property():
    for n, m in all_params(9):
        if m:
            assert build(n, m).arc_set() == build(n, m - 1).arc_set() | {arc_for_index(n, m)}


def test_predicted_in_degrees_examples():
    assert predicted_in_degrees(5, 9) == (1, 2, 2, 2, 2)
    assert predicted_in_degrees(6, 0) == (0,) * 6
    assert predicted_in_degrees(4, 8) == (2, 2, 2, 2) == tuple(sorted(in_degrees(build(4, 8))))


def test_degree_agreement_and_almost_regularity():
    for n, m in all_params(12):
        deg = in_degrees(build(n, m))
        assert tuple(sorted(deg)) == predicted_in_degrees(n, m)
        assert max(deg) - min(deg) <= 1
        assert sum(predicted_in_degrees(n, m)) == m


def test_predicted_spectrum_examples():
    assert predicted_spectrum(5, 9) == Spectrum((0, 2, 2, 2, 3))
    for n in range(2, 8):
        assert predicted_spectrum(n, n * (n - 1)) == Spectrum((0,) + (n,) * (n - 1))
        assert predicted_spectrum(n, 0) == Spectrum((0,) * n)
    # kappa = 3: multiplicity of 3 is 4*5 - 17 = 3, of 4 is 17 - 15 = 2
    assert predicted_spectrum(6, 17) == Spectrum((0, 3, 3, 3, 4, 4))
    assert multiset_distance(eigenvalues(laplacian(build(6, 17))), predicted_spectrum(6, 17)) < 1e-8


def test_predicted_char_poly_matches_sympy_expansion():
    lam = sympy.Symbol("lam")
    for n, m in [(5, 9), (6, 17), (4, 12), (3, 1)]:
        k = m // (n - 1)
        expr = sympy.expand(lam * (lam - k) ** ((k + 1) * (n - 1) - m) * (lam - k - 1) ** (m - k * (n - 1)))
        coeffs = tuple(int(c) for c in reversed(sympy.Poly(expr, lam).all_coeffs()))
        assert predicted_char_poly(n, m).coeffs == coeffs


def test_predicted_connectivity_examples():
    assert predicted_connectivity(5, 9) == 2
    assert predicted_connectivity(6, 17) == 3
    for n in range(2, 10):
        assert predicted_connectivity(n, n - 1) == 1


def test_connectivity_equals_kappa():
    for n, m in all_params(9):
        if m >= n - 1:
            assert algebraic_connectivity(build(n, m)) == pytest.approx(m // (n - 1), abs=1e-8)


def test_star_decomposition_examples():
    d = star_decomposition(5, 9)
    assert (d.full_star_roots, d.partial_star_root, d.partial_star_size) == ((1, 2), 3, 2)
    d = star_decomposition(5, 10)
    assert (d.full_star_roots, d.partial_star_root, d.partial_star_size) == ((1, 2), 3, 3)
    d = star_decomposition(4, 3)
    assert (d.full_star_roots, d.partial_star_root, d.partial_star_size) == ((1,), 2, 1)
    assert star_decomposition(4, 12).partial_star_root is None


def test_star_decomposition_reconstructs_build():
    for n, m in all_params(12):
        assert star_decomposition(n, m).arcs(n) == build(n, m).arc_set()


def test_arc_tail_property():
    for n, m in all_params(9):
        g = build(n, m)
        deg = in_degrees(g)
        for i in range(1, n + 1):
            tails = sorted(t for t, h in g.arcs if h == i)
            others = [v for v in range(1, n + 1) if v != i]
            assert tails == others[:deg[i - 1]]


def test_floor_lemmas():
    for n, m in all_params(14):
        k, nu = m // (n - 1), m // n
        if m >= 1:
            assert nu in (k - 1, k)
        if n >= 3 and 1 <= m <= n * (n - 2):
            assert (m - nu - 1) // (n - 2) == k
        if n >= 3 and m % n == 0 and m < n * (n - 2):
            assert k == nu == (m - nu) // (n - 2)


def test_vertex_deletion_recursion():
    for n in range(3, 10):
        for m in range(1, (n - 1) ** 2 + 1):
            g = build(n, m)
            d_n = in_degrees(g)[-1]
            assert induced_subgraph(g, n - 1) == build(n - 1, m - d_n)


def test_nesting_examples():
    # q = (1, 1), r = (2, 4)
    assert nesting_holds(4, 6, 5, 9)
    assert is_subgraph(build(4, 6), build(5, 9))
    for m in range(7):
        for m2 in range(m, 7):
            assert nesting_holds(3, m, 3, m2)
    # q = (1, 1), r = (2, 0): 3 - 2 >= 5 - 0 fails
    assert not corollary_conditions(3, 5, 5, 5)
    assert not nesting_holds(3, 5, 5, 5)
    assert not is_subgraph(build(3, 5), build(5, 5))


def test_build_sequence_is_order_of_construction():
    assert list(build_sequence(4, 4)) == [(1, 4), (1, 3), (1, 2), (2, 1)]
