import pytest

from conftest import naive_lambda, random_set
from orthofq.constructions import (
    construct_2d,
    construct_E1,
    construct_E2,
    construct_product,
    count_orthogonal_pairs,
    dot_set,
    embed_zero_coordinate,
    product_set,
)
from orthofq.counting import count_tuples_bruteforce, count_tuples_graph
from orthofq.ffield import field_make
from orthofq.geometry import FVector, PointSet, ProjectiveLine, dot, perp_line


def test_2d_examples():
    for q, size in [(7, 24), (5, 8), (3, 4)]:
        E, rep = construct_2d(q)
        assert len(E) == size == rep.size
        assert count_tuples_bruteforce(E, 2).count == 0
        assert rep.verified and rep.method == "all-pairs" and rep.orthogonal_pairs == 0


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13, 17, 19, 25])
def test_2d_sizes_and_lines(q):
    E, rep = construct_2d(q)
    want = (q * q - 1) // 2 if q % 4 == 3 else (q - 1) ** 2 // 2
    assert len(E) == want
    assert rep.measurements["kept_lines"] == ((q + 1) // 2 if q % 4 == 3 else (q - 1) // 2)
    assert count_orthogonal_pairs(E) == 0
    assert not E.contains_zero()
    lines = {ProjectiveLine.through(v) for v in E}
    for l in lines:
        assert perp_line(l) not in lines


def test_E1_p3():
    E1, rep = construct_E1(3)
    m = rep.measurements
    assert (m["order_B"], m["order_A"]) == (2, 1)
    assert m["circle_size"] == 4
    assert not m["sqrt_minus_one_in_B"] and not m["four_divides_order_B"]
    assert naive_lambda(E1, 2) == 0
    assert rep.verified


def test_E1_p11():
    E1, rep = construct_E1(11)
    m = rep.measurements
    assert (m["order_B"], m["order_A"]) == (30, 15)
    assert m["A_generated_by_beta_squared"]
    assert count_tuples_graph(E1, 2).count == 0
    assert count_orthogonal_pairs(E1) == 0
    assert rep.verified and 0 not in dot_set(E1)


def test_E1_p19_group_facts():
    _, rep = construct_E1(19)
    m = rep.measurements
    assert m["order_B"] == (361 - 1) // 4
    assert not m["sqrt_minus_one_in_B"]
    assert not m["four_divides_order_B"]
    assert not m["minus_one_is_square_in_B"]


@pytest.mark.parametrize("p", [3, 11, 19])
def test_circle_size_is_measured(p):
    _, rep = construct_E1(p)
    # p = 3 (mod 4): the unit circle over F_p has p + 1 points
    assert rep.measurements["circle_size"] == p + 1
    assert any("differs from p - 1" in n for n in rep.notes)


@pytest.mark.parametrize("p", [2, 5, 7, 9, 13])
def test_E1_rejects_bad_p(p):
    with pytest.raises(ValueError):
        construct_E1(p)


def test_E2_small():
    E2, rep = construct_E2(3, 4)
    assert E2.d == 2 and len(E2) == 4
    E2, rep = construct_E2(3, 3)
    assert E2.d == 1 and {v.coords for v in E2} == {(1,), (2,)}


def test_E2_p11_dot_set_measured():
    E2, rep = construct_E2(11, 4)
    f = E2.field
    brute = {dot(u, v).enc for u in E2 for v in E2}
    assert set(rep.dot_sets["E2"]) == brute
    # u . (-u) = -1 and -1 is not in the odd-order group A
    assert not rep.measurements["E2_dots"]["within_A_or_zero"]
    assert not rep.verified


def test_E2_requires_d3():
    with pytest.raises(ValueError):
        construct_E2(3, 2)


@pytest.mark.parametrize("p,d", [(3, 3), (3, 4), (3, 5)])
def test_product_methods_agree(p, d):
    E, rep = construct_product(p, d)
    brute = count_tuples_bruteforce(E, 2).count
    assert rep.orthogonal_pairs == brute
    assert rep.measurements["methods_agree"]
    assert rep.measurements["zero_in_sumset"] == (brute > 0)


def test_product_p3_d4_has_orthogonal_pair():
    E, rep = construct_product(3, 4)
    f = E.field
    # (x, w) and (x, -w) with x . x = w . w
    u = (1, 0, 1, 0)
    v = (1, 0, f.neg_enc(1), 0)
    assert FVector(f, u) in E and FVector(f, v) in E
    assert dot(FVector(f, u), FVector(f, v)) == f.zero
    assert not rep.verified


def test_product_p11_sumset_only():
    E, rep = construct_product(11, 4)
    assert rep.method == "sumset"
    assert rep.measurements["E1_size"] * rep.measurements["E2_size"] == len(E)


def test_product_set_layout():
    f = field_make(3, 2)
    A = PointSet(f, 2, [1, 5])
    B = PointSet(f, 1, [2])
    P = product_set(A, B)
    assert {v.coords for v in P} == {(1, 0, 2), (5, 0, 2)}


def test_embed_zero_coordinate():
    f = field_make(3)
    E = PointSet.full_space(f, 2)
    F = embed_zero_coordinate(E)
    assert F.d == 3 and all(v.coords[-1] == 0 for v in F)
    assert count_tuples_graph(F, 2).count == 33
    E7, _ = construct_2d(7)
    assert count_tuples_graph(embed_zero_coordinate(E7), 2).count == 0


def test_embed_preserves_triples(rng):
    for _ in range(10):
        E = random_set(rng, 3, 2, 9)
        assert naive_lambda(embed_zero_coordinate(E), 3) == naive_lambda(E, 3)


def test_report_json_serializable():
    import json

    _, rep = construct_product(3, 4)
    json.dumps(rep.to_json())
