"""Laplacian spectra: numerical eigenvalues, exact characteristic polynomials,
spanning-forest counts and the normalized eigenvalue spread.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.sqfreetools import dup_sqf_list

from .graph import DiGraph, IntMatrix, laplacian

EXACT_MAX_ORDER = 16


@dataclass
class Tolerances:
    """Global tolerance settings.  Mutate ``TOL`` to change them process-wide."""

    integer: float = 1e-8
    multiset: float = 1e-6


TOL = Tolerances()


class SpectrumError(ValueError):
    pass


class SizeCapError(ValueError):
    pass


def _sort_key(z: complex):
    return (round(z.real, 12), round(z.imag, 12))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset sorted by (real part, imaginary part)."""

    values: tuple[complex, ...]

    def __post_init__(self):
        vals = tuple(sorted((complex(v) for v in self.values), key=_sort_key))
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def real_parts(self) -> np.ndarray:
        return np.array([v.real for v in self.values])

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def close_to(self, other: "Spectrum | Iterable[complex]", tol: float | None = None) -> bool:
        return multiset_distance(self, other) <= (TOL.multiset if tol is None else tol)

    def to_json(self) -> str:
        return json.dumps([[v.real, v.imag] for v in self.values])

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        return cls(tuple(complex(re, im) for re, im in json.loads(text)))


def multiset_distance(a: Spectrum | Iterable[complex], b: Spectrum | Iterable[complex]) -> float:
    """Largest pairwise gap after sorting both sides by (Re, Im)."""
    sa = a if isinstance(a, Spectrum) else Spectrum(tuple(a))
    sb = b if isinstance(b, Spectrum) else Spectrum(tuple(b))
    if len(sa) != len(sb):
        return float("inf")
    if not len(sa):
        return 0.0
    return max(abs(x - y) for x, y in zip(_tolerant_order(sa.values), _tolerant_order(sb.values)))


def _tolerant_order(vals, tol: float = 1e-6) -> list[complex]:
    """Sort by real part, treating real parts that chain within ``tol`` as ties broken by Im."""
    by_re = sorted(vals, key=lambda z: z.real)
    out, group = [], [by_re[0]]
    for z in by_re[1:]:
        if z.real - group[-1].real <= tol:
            group.append(z)
        else:
            out += sorted(group, key=lambda z: z.imag)
            group = [z]
    return out + sorted(group, key=lambda z: z.imag)


def _check_laplacian(L: IntMatrix) -> None:
    for i, row in enumerate(L.entries):
        if sum(row) != 0:
            raise SpectrumError(f"row {i + 1} of the Laplacian does not sum to zero")


def eigenvalues(L: IntMatrix | np.ndarray) -> Spectrum:
    """Numerical eigenvalues of a Laplacian via LAPACK's nonsymmetric QR solver."""
    if not isinstance(L, IntMatrix):
        arr = np.asarray(L)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise SpectrumError(f"expected a square matrix, got shape {arr.shape}")
        L = IntMatrix.from_rows(arr.tolist())
    _check_laplacian(L)
    A = L.to_numpy()
    return Spectrum(tuple(polish_clusters(A, np.linalg.eigvals(A))))


def _single_linkage(vals: np.ndarray, tau: float) -> list[np.ndarray]:
    """Split ``vals`` into groups whose members chain together within distance ``tau``."""
    k = len(vals)
    label = list(range(k))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(vals[i] - vals[j]) <= tau:
                label[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def _is_multiple_eigenvalue(A: np.ndarray, vals: np.ndarray, mu: complex) -> bool:
    """Whether ``vals`` look like one eigenvalue ``mu`` of multiplicity ``len(vals)`` after rounding.

    A k-fold eigenvalue perturbed by rounding spreads over a ring of radius
    about (eps * |A|)**(1/k); a wider cluster holds distinct eigenvalues.
    The mean must also make ``A - mu I`` numerically singular.
    """
    k = len(vals)
    norm = np.linalg.norm(A, 2)
    radius = 100 * (np.finfo(float).eps * max(1.0, norm)) ** (1.0 / k)
    if np.abs(vals - mu).max() > radius:
        return False
    smallest = np.linalg.svd(A - mu * np.eye(len(A)), compute_uv=False)[-1]
    return smallest <= 1e-8 * max(1.0, norm)


def polish_clusters(A: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Replace each perturbed multiple eigenvalue by the mean of its cluster.

    A defective eigenvalue of multiplicity k comes back from QR spread over
    a ring of radius about eps**(1/k); the ring's mean is accurate to about
    eps.  Candidate clusters are found by single linkage at shrinking
    radii and merged only when they are tight enough to be such a ring
    and their mean makes ``A - mean I`` singular.
    """
    vals = np.asarray(vals, dtype=complex)
    out = vals.copy()
    scale = max(1.0, float(np.abs(vals).max()))
    pending = [np.arange(len(vals))]
    tau = 0.25 * scale
    while pending and tau > 1e-12 * scale:
        nxt = []
        for group in pending:
            for sub in _single_linkage(vals[group], tau):
                idx = group[sub]
                if len(idx) == 1:
                    continue
                mu = vals[idx].mean()
                if abs(mu.imag) <= 1e-12 * scale:
                    mu = complex(mu.real, 0.0)
                if _is_multiple_eigenvalue(A, vals[idx], mu):
                    out[idx] = mu
                else:
                    nxt.append(idx)
        pending = nxt
        tau /= 2
    return out


# exact integer algorithms

def berkowitz(rows: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of det(xI - A), highest degree first, without division.

    Builds the characteristic polynomial of each leading principal submatrix
    from the previous one via a Toeplitz matrix-vector product.
    """
    n = len(rows)
    A = [list(map(int, r)) for r in rows]
    poly = [1]
    for k in range(n):
        # submatrix A[:k, :k], column c = A[:k, k], row r = A[k, :k]
        col = [A[i][k] for i in range(k)]
        row = A[k][:k]
        toeplitz = [1, -A[k][k]]
        vec = col
        for _ in range(k):
            toeplitz.append(-sum(r * v for r, v in zip(row, vec)))
            vec = [sum(A[i][j] * vec[j] for j in range(k)) for i in range(k)]
        # new poly = T @ poly, T lower triangular Toeplitz of shape (k+2, k+1)
        poly = [sum(toeplitz[i - j] * poly[j] for j in range(min(i, k) + 1))
                for i in range(k + 2)]
    return poly


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer input."""
    M = [list(map(int, r)) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def principal_minor(L: IntMatrix, removed: Iterable[int]) -> int:
    """Determinant of ``L`` with the rows and columns of the 1-indexed ``removed`` deleted."""
    drop = {v - 1 for v in removed}
    keep = [i for i in range(L.order) if i not in drop]
    return bareiss_det([[L.entries[i][j] for j in keep] for i in keep])


@dataclass(frozen=True)
class CharPoly:
    """Monic integer polynomial ``sum(coeffs[k] * x**k)``, lowest degree first."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def forest_coefficients(self) -> tuple[int, ...]:
        """``a_0..a_n`` with ``p(x) = sum((-1)**(n-k) * a_k * x**k)``."""
        n = self.degree
        return tuple((-1) ** (n - k) * c for k, c in enumerate(self.coeffs))

    def lowest_nonzero_degree(self) -> int:
        return next(k for k, c in enumerate(self.coeffs) if c != 0)

    def __call__(self, x):
        return sum(c * x ** k for k, c in enumerate(self.coeffs))

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "CharPoly":
        return cls(tuple(int(c) for c in json.loads(text)))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "CharPoly":
        coeffs = [1]
        for r in roots:
            # multiply by (x - r)
            shifted = [0] + coeffs
            coeffs = [s - r * c for s, c in zip(shifted, coeffs + [0])]
        return cls(tuple(coeffs))


def char_poly_exact(L: IntMatrix) -> CharPoly:
    if L.order > EXACT_MAX_ORDER:
        raise SizeCapError(f"exact characteristic polynomial is capped at order {EXACT_MAX_ORDER}, got {L.order}")
    return CharPoly(tuple(reversed(berkowitz(L.entries))))


def exact_spectrum(L: IntMatrix) -> Spectrum:
    """Eigenvalues from the exact characteristic polynomial.

    The polynomial is split into square-free factors first, so repeated
    (possibly defective) eigenvalues carry exact multiplicities and each
    factor's roots are simple and well conditioned.
    """
    _check_laplacian(L)
    high_first = list(reversed(char_poly_exact(L).coeffs))
    _, factors = dup_sqf_list([ZZ(c) for c in high_first], ZZ)
    vals: list[complex] = []
    for factor, mult in factors:
        coeffs = [int(c) for c in factor]
        # integer eigenvalues of a Laplacian lie in 0..2*max in-degree
        for r in range(0, 2 * L.order):
            if len(coeffs) < 2:
                break
            quotient, rem = _divide_linear(coeffs, r)
            if rem == 0:
                coeffs = quotient
                vals.extend([complex(r)] * mult)
        if len(coeffs) > 1:
            vals.extend(complex(z) for z in np.roots(coeffs) for _ in range(mult))
    if len(vals) != L.order:
        raise SpectrumError("square-free decomposition lost roots")
    return Spectrum(tuple(vals))


def _divide_linear(coeffs: list[int], r: int) -> tuple[list[int], int]:
    """Synthetic division of a highest-first integer polynomial by (x - r)."""
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + r * out[-1])
    return out[:-1], out[-1]


def forest_counts(g: DiGraph) -> tuple[int, ...]:
    """``(a_1, ..., a_n)``: spanning directed forests of ``g`` with k trees."""
    return char_poly_exact(laplacian(g)).forest_coefficients()[1:]


def zero_multiplicity(g: DiGraph) -> int:
    return char_poly_exact(laplacian(g)).lowest_nonzero_degree()


def algebraic_connectivity(g: DiGraph, method: str = "auto") -> float:
    """Second smallest real part of the Laplacian eigenvalues.

    ``method`` is ``"exact"`` (square-free factorization of the integer
    characteristic polynomial), ``"numeric"`` (LAPACK), or ``"auto"``,
    which uses the exact route up to order 16.
    """
    if g.n < 2:
        raise SpectrumError("algebraic connectivity needs at least 2 vertices")
    if method == "auto":
        method = "exact" if g.n <= EXACT_MAX_ORDER else "numeric"
    L = laplacian(g)
    if method == "exact":
        spec = exact_spectrum(L)
    elif method == "numeric":
        spec = eigenvalues(L)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(np.sort(spec.real_parts)[1])


def complement_spectrum(s: Spectrum, tol: float | None = None) -> Spectrum:
    """Map the spectrum of ``G`` to that of its complement: drop one zero, send λ to n - λ."""
    tol = TOL.integer if tol is None else tol
    vals = list(s.values)
    idx = min(range(len(vals)), key=lambda i: abs(vals[i]))
    if abs(vals[idx]) > tol:
        raise SpectrumError("spectrum has no zero eigenvalue")
    del vals[idx]
    n = s.n
    return Spectrum((0j,) + tuple(n - v for v in vals))


def normalized_spread(s: Spectrum | Iterable[complex], m: int) -> tuple[float, float]:
    """Return ``(sigma2, sigma2 * n**2 / m**2)`` over the eigenvalues other than one zero."""
    if m <= 0:
        raise ValueError("arc count must be positive")
    vals = list(s.values if isinstance(s, Spectrum) else s)
    n = len(vals)
    if n < 2:
        raise ValueError("need at least two eigenvalues")
    del vals[min(range(n), key=lambda i: abs(vals[i]))]
    arr = np.array(vals, dtype=complex)
    sigma2 = float(np.mean(np.abs(arr - arr.mean()) ** 2))
    return sigma2, sigma2 * n * n / (m * m)
