"""Exact counts of mutually orthogonal k-tuples in a point set.

``lambda_k(E)`` counts ordered tuples (x^1, ..., x^k) in E^k with
x^i . x^j = 0 for all i < j. A vector may repeat inside a tuple only if it
is isotropic (x . x = 0).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, TextIO

import numpy as np

from .geometry import PointSet, dot_enc, orthogonality_matrix

DEFAULT_PAIR_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TupleCensus:
    k: int
    count: int
    expected: Fraction

    @property
    def ratio(self) -> Fraction | None:
        if self.expected == 0:
            return None
        return Fraction(self.count) / self.expected

    @property
    def ratio_decimal(self) -> str | None:
        r = self.ratio
        return None if r is None else f"{float(r):.12g}"

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "lambda": self.count,
            "expected_num": self.expected.numerator,
            "expected_den": self.expected.denominator,
            "ratio_decimal": self.ratio_decimal,
        }


def expected_count(n: int, q: int, k: int) -> Fraction:
    """n**k / q**C(k, 2)."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    return Fraction(n**k, q ** (k * (k - 1) // 2))


def threshold_exponent(d: int, k: int) -> Fraction:
    if not 0 < k * (k - 1) // 2 < d:
        raise ValueError(f"theorem hypothesis 0 < C(k,2) < d fails for k={k}, d={d}")
    return Fraction(d * (k - 1), k) + Fraction(k - 1, 2) + Fraction(1, k)


def threshold_size(q: int, d: int, k: int) -> tuple[float, Fraction]:
    """Size q**(d(k-1)/k + (k-1)/2 + 1/k) above which the count estimate applies.

    The leading constant is unspecified in the theorem and taken as 1 here.
    """
    exponent = threshold_exponent(d, k)
    return q ** float(exponent), exponent


class OrthAdjacency:
    """Orthogonality relation on E as packed bit rows.

    Vertex i is the i-th vector of E in venc order. Bit j of ``rows[i]`` is
    set iff E[i] . E[j] == 0; the diagonal bit marks isotropic vectors.
    """

    def __init__(self, E: PointSet, distinct: bool = False):
        self.vertices = E.vencs
        self.field = E.field
        self.d = E.d
        n = len(E)
        if n == 0:
            self.matrix = np.zeros((0, 0), dtype=bool)
        else:
            self.matrix = orthogonality_matrix(E.field, E.coords, E.coords)
        if distinct:
            np.fill_diagonal(self.matrix, False)
            if E.contains_zero():
                self.matrix[0, :] = False
                self.matrix[:, 0] = False
        self.rows = _pack_rows(self.matrix)
        self.full_mask = (1 << n) - 1
        if distinct and E.contains_zero():
            self.full_mask &= ~1

    def __len__(self):
        return len(self.vertices)

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.rows[i]))

    def is_isotropic(self, i: int) -> bool:
        return bool(self.rows[i] >> i & 1)


def _pack_rows(matrix: np.ndarray) -> list[int]:
    if matrix.size == 0:
        return [0] * len(matrix)
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def count_from_adjacency(rows: list[int], start_mask: int, k: int, first: range | list | None = None) -> int:
    """Ordered k-tuples that are pairwise adjacent, with the first vertex in ``first``."""
    if k == 0:
        return 1
    if first is None:
        first = list(_bits(start_mask))
    if k == 1:
        return sum(1 for i in first if start_mask >> i & 1)
    total = 0
    for i in first:
        if not start_mask >> i & 1:
            continue
        total += _count_rec(rows, start_mask & rows[i], k - 1)
    return total


def _count_rec(rows: list[int], candidates: int, depth: int) -> int:
    if depth == 1:
        return candidates.bit_count()
    total = 0
    mask = candidates
    while mask:
        low = mask & -mask
        i = low.bit_length() - 1
        mask ^= low
        total += _count_rec(rows, candidates & rows[i], depth - 1)
    return total


def _count_chunk(args) -> int:
    rows, start_mask, k, first = args
    return count_from_adjacency(rows, start_mask, k, first)


def count_tuples_graph(E: PointSet, k: int, distinct: bool = False, n_jobs: int = 1) -> TupleCensus:
    """lambda_k by recursive intersection of orthogonality neighbourhoods.

    Ordered tuples are counted, so a candidate set is never restricted to
    vertices after the current one. Work splits over the first coordinate;
    partial counts are integers and combine exactly for any ``n_jobs``.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    expected = expected_count(len(E), E.q, k)
    if k == 0:
        return TupleCensus(0, 1, expected)
    adj = OrthAdjacency(E, distinct=distinct)
    n = len(adj)
    if n_jobs <= 1 or n < 2 * n_jobs or k == 1:
        total = count_from_adjacency(adj.rows, adj.full_mask, k, range(n))
    else:
        chunks = [range(j, n, n_jobs) for j in range(n_jobs)]
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            total = sum(pool.map(_count_chunk, [(adj.rows, adj.full_mask, k, c) for c in chunks]))
    return TupleCensus(k, total, expected)


def count_tuples_bruteforce(
    E: PointSet, k: int, distinct: bool = False, budget: int = DEFAULT_PAIR_BUDGET
) -> TupleCensus:
    """lambda_k by enumerating E^k with field arithmetic, depth-first.

    A branch is abandoned as soon as its newest vector fails a pairwise check,
    which is the same set of tuples as the full nested loop.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    n = len(E)
    if n**k > budget:
        raise BudgetExceeded(
            f"|E|^k = {n}^{k} exceeds the brute-force budget {budget}; use count_tuples_graph"
        )
    expected = expected_count(n, E.q, k)
    f = E.field
    vecs = [v.coords for v in E]
    zero = tuple([0] * E.d)
    orth = [[dot_enc(f, u, v) == 0 for v in vecs] for u in vecs]
    allowed = [not (distinct and v == zero) for v in vecs]

    def ok(i: int, j: int) -> bool:
        if distinct and i == j:
            return False
        return orth[i][j]

    def rec(prefix: list[int]) -> int:
        if len(prefix) == k:
            return 1
        total = 0
        for j in range(n):
            if allowed[j] and all(ok(i, j) for i in prefix):
                prefix.append(j)
                total += rec(prefix)
                prefix.pop()
        return total

    return TupleCensus(k, rec([]), expected)


def iter_orthogonal_tuples(E: PointSet, j: int) -> Iterator[tuple[int, ...]]:
    """Index tuples (into E's venc order) of the members of D_j."""
    adj = OrthAdjacency(E)

    def rec(prefix: tuple[int, ...], candidates: int):
        if len(prefix) == j:
            yield prefix
            return
        for i in _bits(candidates):
            yield from rec(prefix + (i,), candidates & adj.rows[i])

    yield from rec((), adj.full_mask)


def bridge_sum(E: PointSet, k: int) -> int:
    """Sum over D_{k-1} of |E cap H|, which must equal lambda_k."""
    if k < 1:
        raise ValueError("bridge identity needs k >= 1")
    n = len(E)
    if n == 0:
        return 0
    Z = orthogonality_matrix(E.field, E.coords, E.coords)
    total = 0
    for tup in iter_orthogonal_tuples(E, k - 1):
        mask = np.ones(n, dtype=bool)
        for i in tup:
            mask &= Z[i]
        total += int(mask.sum())
    return total


@dataclass(frozen=True)
class MainTerms:
    """Split of lambda_k by which dual variables vanish.

    ``main`` collects the all-zero pattern, ``full`` the all-nonzero one and
    ``mixed`` everything in between; each is an exact rational.
    """

    k: int
    main: Fraction
    full: Fraction
    mixed: Fraction
    count: int

    def total(self) -> Fraction:
        return self.main + self.full + self.mixed

    @property
    def holds(self) -> bool:
        return self.total() == self.count

    def to_json(self) -> dict:
        def frac(x: Fraction) -> list[int]:
            return [x.numerator, x.denominator]

        return {
            "k": self.k,
            "I": frac(self.main),
            "II": frac(self.full),
            "III": frac(self.mixed),
            "lambda": self.count,
            "identity_holds": self.holds,
        }


def decompose_main_terms(E: PointSet, k: int) -> MainTerms:
    """Evaluate the three parts of lambda_k separately.

    Writing w_i(y) = q [x^i . y = 0] - 1 and S_T = sum_{y in E} prod_{i in T} w_i(y),
    inclusion-exclusion gives q^(k-1) |E cap H| = sum over subsets T of S_T.
    Summed over D_{k-1}: T empty gives the main term, T full the discrepancy
    term, the rest the mixed term. lambda_k is counted independently.
    """
    if k < 2:
        raise ValueError(f"decomposition needs k >= 2, got {k}")
    n, q = len(E), E.q
    count = count_tuples_graph(E, k).count
    if n == 0:
        return MainTerms(k, Fraction(0), Fraction(0), Fraction(0), count)
    W = q * orthogonality_matrix(E.field, E.coords, E.coords).astype(np.int64) - 1
    j = k - 1
    proper = [T for r in range(1, j) for T in itertools.combinations(range(j), r)]
    tuples = 0
    full = 0
    mixed = 0
    for tup in iter_orthogonal_tuples(E, j):
        tuples += 1
        rows = W[list(tup)]
        full += int(rows.prod(axis=0).sum())
        for T in proper:
            mixed += int(rows[list(T)].prod(axis=0).sum())
    scale = Fraction(1, q**j)
    return MainTerms(k, n * tuples * scale, full * scale, mixed * scale, count)


EXPORT_FORMATS = ("edgelist", "dimacs")


def export_graph(E: PointSet, fh: TextIO, fmt: str = "edgelist") -> int:
    """Write the orthogonality graph of E; returns the number of edges written.

    ``edgelist`` lines are ``u v`` with venc values, u <= v, isotropic
    vertices as self-loops. ``dimacs`` numbers vertices 1..n in venc order,
    maps them back with ``c v`` lines and writes ``e i j`` edges.
    """
    if fmt not in EXPORT_FORMATS:
        raise ValueError(f"unknown graph format {fmt!r}; choose from {EXPORT_FORMATS}")
    adj = OrthAdjacency(E)
    n = len(adj)
    edges = [(i, j) for i in range(n) for j in _bits(adj.rows[i] >> i << i)]
    loops = sum(1 for i, j in edges if i == j)
    vs = adj.vertices
    if fmt == "edgelist":
        fh.write(f"# q={E.q} d={E.d} n={n} edges={len(edges)} loops={loops}\n")
        for i, j in edges:
            fh.write(f"{vs[i]} {vs[j]}\n")
    else:
        fh.write(f"c orthogonality graph q={E.q} d={E.d} loops={loops}\n")
        fh.write(f"p edge {n} {len(edges)}\n")
        for i, v in enumerate(vs):
            fh.write(f"c v {i + 1} {v}\n")
        for i, j in edges:
            fh.write(f"e {i + 1} {j + 1}\n")
    return len(edges)


def full_space_pair_count(q: int, d: int) -> int:
    """lambda_2 of all of F_q^d: (q^d - 1) q^(d-1) + q^d."""
    return (q**d - 1) * q ** (d - 1) + q**d

