import io
import random
from fractions import Fraction

import pytest

from conftest import naive_lambda, random_set
from orthofq.counting import (
    BudgetExceeded,
    OrthAdjacency,
    bridge_sum,
    count_tuples_bruteforce,
    count_tuples_graph,
    decompose_main_terms,
    expected_count,
    export_graph,
    full_space_pair_count,
    threshold_size,
)
from orthofq.ffield import field_make
from orthofq.geometry import FVector, PointSet

F2, F3, F9 = field_make(2), field_make(3), field_make(3, 2)


def test_full_f3_squared_pairs():
    E = PointSet.full_space(F3, 2)
    assert naive_lambda(E, 2) == 33 == (9 - 1) * 3 + 9
    assert count_tuples_bruteforce(E, 2).count == 33
    assert count_tuples_graph(E, 2).count == 33


def test_single_nonisotropic_vector():
    E = PointSet(F3, 2, [FVector(F3, (1, 0))])
    assert count_tuples_bruteforce(E, 2).count == 0
    assert count_tuples_graph(E, 2).count == 0


def test_isotropic_vector_pairs_with_itself():
    E = PointSet(F9, 2, [FVector.of(F9, [F9(0, 1), F9.one])])
    assert count_tuples_bruteforce(E, 2).count == 1
    assert count_tuples_graph(E, 2).count == 1


def test_full_f2_squared_triples_against_enumeration():
    E = PointSet.full_space(F2, 2)
    want = naive_lambda(E, 3)
    assert count_tuples_graph(E, 3).count == want
    assert count_tuples_bruteforce(E, 3).count == want


def test_small_k_values(rng):
    for _ in range(20):
        E = random_set(rng, 3, 2, 9)
        assert count_tuples_graph(E, 0).count == 1
        assert count_tuples_graph(E, 1).count == len(E)
        assert count_tuples_bruteforce(E, 0).count == 1
        assert count_tuples_bruteforce(E, 1).count == len(E)


@pytest.mark.parametrize("q,d", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (9, 2)])
@pytest.mark.parametrize("k", [2, 3])
def test_graph_and_bruteforce_match_enumeration(q, d, k):
    rng = random.Random(q * 100 + d * 10 + k)
    for _ in range(8):
        E = random_set(rng, q, d, 14)
        want = naive_lambda(E, k)
        assert count_tuples_graph(E, k).count == want
        assert count_tuples_bruteforce(E, k).count == want


@pytest.mark.parametrize("q,d", [(3, 2), (9, 2), (2, 3)])
def test_distinct_flag(q, d):
    rng = random.Random(q + d)
    for _ in range(8):
        E = random_set(rng, q, d, 12)
        for k in (2, 3):
            want = naive_lambda(E, k, distinct=True)
            assert count_tuples_graph(E, k, distinct=True).count == want
            assert count_tuples_bruteforce(E, k, distinct=True).count == want


def test_parallel_count_identical():
    E = PointSet.full_space(F3, 3)
    serial = count_tuples_graph(E, 3).count
    assert count_tuples_graph(E, 3, n_jobs=2).count == serial


def test_bruteforce_budget():
    E = PointSet.full_space(F3, 3)
    with pytest.raises(BudgetExceeded, match="count_tuples_graph"):
        count_tuples_bruteforce(E, 4, budget=1000)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
@pytest.mark.parametrize("d", [2, 3])
def test_full_space_pairs(q, d):
    from orthofq.ffield import field_for_order

    E = PointSet.full_space(field_for_order(q), d)
    assert count_tuples_graph(E, 2).count == full_space_pair_count(q, d)


def test_monotone_under_inclusion(rng):
    for _ in range(20):
        E = random_set(rng, 3, 3, 20)
        sub = PointSet(E.field, E.d, [v for v in E.vencs if rng.random() < 0.6])
        for k in (2, 3):
            assert count_tuples_graph(sub, k).count <= count_tuples_graph(E, k).count


def test_coordinate_permutation_invariance(rng):
    for _ in range(10):
        E = random_set(rng, 3, 3, 20)
        perm = [2, 0, 1]
        P = PointSet(E.field, 3, [FVector(E.field, tuple(v.coords[i] for i in perm)) for v in E])
        for k in (2, 3, 4):
            assert count_tuples_graph(P, k).count == count_tuples_graph(E, k).count


def test_expected_count_examples():
    assert expected_count(81, 3, 2) == 2187
    assert expected_count(10, 5, 3) == 8
    assert expected_count(0, 7, 3) == 0


def test_census_json():
    c = count_tuples_graph(PointSet.full_space(F3, 2), 2)
    assert c.to_json() == {
        "k": 2, "lambda": 33, "expected_num": 27, "expected_den": 1, "ratio_decimal": "1.22222222222",
    }
    assert c.ratio == Fraction(33, 27)
    assert count_tuples_graph(PointSet(F3, 2), 2).ratio is None


def test_threshold_examples():
    assert threshold_size(9, 4, 2) == (729.0, Fraction(3))
    value, exp = threshold_size(3, 7, 3)
    assert exp == Fraction(2 * 7, 3) + 1 + Fraction(1, 3) == 6
    assert value == pytest.approx(729)
    assert threshold_size(7, 3, 2)[1] == Fraction(5, 2)


@pytest.mark.parametrize("d,k", [(1, 2), (3, 3), (2, 1)])
def test_threshold_hypothesis(d, k):
    with pytest.raises(ValueError, match="hypothesis"):
        threshold_size(3, d, k)


def test_decomposition_full_f3():
    t = decompose_main_terms(PointSet.full_space(F3, 2), 2)
    assert t.main == 27
    # the zero vector is the only tuple with nonzero discrepancy: S = 9 * 2
    assert t.full == Fraction(18, 3)
    assert t.mixed == 0
    assert t.total() == 33 == t.count


def test_decomposition_empty():
    t = decompose_main_terms(PointSet(F3, 2), 3)
    assert (t.main, t.full, t.mixed) == (0, 0, 0)


@pytest.mark.parametrize("q,d,k", [(3, 2, 2), (3, 3, 3), (5, 2, 3), (2, 3, 4), (9, 2, 3)])
def test_decomposition_identity(q, d, k):
    rng = random.Random(q * d * k)
    for _ in range(10):
        E = random_set(rng, q, d, 20)
        t = decompose_main_terms(E, k)
        assert t.holds
        assert t.main == Fraction(len(E) * naive_lambda(E, k - 1), q ** (k - 1))
        if k == 2:
            assert t.mixed == 0


@pytest.mark.parametrize("q,d,k", [(3, 2, 2), (3, 3, 3), (5, 2, 3), (2, 3, 4)])
def test_bridge_identity(q, d, k):
    rng = random.Random(q + d + k)
    for _ in range(10):
        E = random_set(rng, q, d, 20)
        assert bridge_sum(E, k) == naive_lambda(E, k)


def test_adjacency_symmetric(rng):
    for _ in range(10):
        E = random_set(rng, 9, 2, 30)
        adj = OrthAdjacency(E)
        assert (adj.matrix == adj.matrix.T).all()


def test_export_two_vectors():
    E = PointSet(F3, 2, [FVector(F3, (1, 0)), FVector(F3, (0, 1))])
    buf = io.StringIO()
    assert export_graph(E, buf) == 1
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("# q=3 d=2 n=2 edges=1")
    assert lines[1:] == ["1 3"]


def test_export_self_loop():
    v = FVector.of(F9, [F9(0, 1), F9.one])
    buf = io.StringIO()
    export_graph(PointSet(F9, 2, [v]), buf)
    assert buf.getvalue().splitlines()[1:] == [f"{v.venc} {v.venc}"]


def test_export_consistent_with_census(rng):
    for E in [PointSet.full_space(F3, 2)] + [random_set(rng, 9, 2, 40) for _ in range(5)]:
        buf = io.StringIO()
        export_graph(E, buf)
        rows = [tuple(map(int, l.split())) for l in buf.getvalue().splitlines()[1:]]
        loops = sum(u == v for u, v in rows)
        assert all(u <= v for u, v in rows)
        assert 2 * (len(rows) - loops) + loops == count_tuples_graph(E, 2).count


def test_export_dimacs():
    E = PointSet.full_space(F3, 2)
    buf = io.StringIO()
    m = export_graph(E, buf, "dimacs")
    lines = buf.getvalue().splitlines()
    assert f"p edge 9 {m}" in lines
    edges = [l for l in lines if l.startswith("e ")]
    assert len(edges) == m
    assert all(1 <= int(x) <= 9 for l in edges for x in l.split()[1:])


def test_export_unknown_format():
    with pytest.raises(ValueError, match="unknown graph format"):
        export_graph(PointSet(F3, 2), io.StringIO(), "graphml")
