from __future__ import annotations

from itertools import combinations
from math import comb

import pytest
from hypothesis import given, strategies as st

from zcat import complex as cx

from .conftest import SMALL, complex_named


def dense_product(A: cx.IntegerMatrix, B: cx.IntegerMatrix) -> cx.IntegerMatrix:
    return A @ B


@pytest.mark.parametrize("name", SMALL + ["product(circle,circle)", "sphere(3)"])
def test_boundary_squares_to_zero(name):
    K = complex_named(name)
    for q in range(2, K.dimension + 1):
        assert dense_product(cx.boundary_matrix(K, q - 1), cx.boundary_matrix(K, q)).is_zero()


@pytest.mark.parametrize(
    "name, chi",
    [("circle", 0), ("torus", 0), ("sphere(2)", 2), ("sphere(3)", 0), ("surface(2)", -2), ("surface(3)", -4),
     ("surface(4)", -6), ("wedge(torus,circle)", -1)],
)
def test_euler_characteristic(name, chi):
    assert cx.euler_characteristic(complex_named(name)) == chi


@pytest.mark.parametrize("a, b", [("circle", "circle"), ("circle", "sphere(2)"), ("surface(2)", "circle")])
def test_product_chi_is_multiplicative(a, b):
    A, B = complex_named(a), complex_named(b)
    P = cx.product(A, B)
    assert cx.euler_characteristic(P) == cx.euler_characteristic(A) * cx.euler_characteristic(B)
    assert P.dimension == A.dimension + B.dimension


@pytest.mark.parametrize("a, b", [("torus", "circle"), ("sphere(2)", "surface(2)"), ("circle", "circle")])
def test_wedge_chi(a, b):
    A, B = complex_named(a), complex_named(b)
    assert cx.euler_characteristic(cx.wedge(A, B)) == cx.euler_characteristic(A) + cx.euler_characteristic(B) - 1


def staircase_count(p: int, q: int) -> int:
    return comb(p + q, p)


def test_product_top_count_oracle():
    # each pair of top simplices contributes C(p+q, p) staircase simplices
    A, B = complex_named("torus"), complex_named("circle")
    P = cx.product(A, B)
    expected = len(A.simplices[2]) * len(B.simplices[1]) * staircase_count(2, 1)
    assert P.count(3) == expected


def test_sphere_f_vector():
    for n in range(0, 4):
        K = cx.sphere(n)
        assert K.f_vector == tuple(comb(n + 2, k + 1) for k in range(n + 1))


def test_torus_is_minimal_product():
    T = cx.torus()
    assert T.f_vector == (9, 27, 18)


def test_surfaces_are_closed_pseudomanifolds():
    for g in (2, 3):
        K = cx.surface(g)
        counts = {e: 0 for e in K.simplices[1]}
        for t in K.simplices[2]:
            for e in combinations(t, 2):
                counts[e] += 1
        assert set(counts.values()) == {2}


@given(st.lists(st.lists(st.integers(0, 7), min_size=1, max_size=4, unique=True), min_size=1, max_size=8))
def test_serialize_round_trip(tops):
    K = cx.from_maximal(tops, "rand")
    L = cx.parse_complex(cx.serialize_complex(K))
    assert L.simplices == K.simplices
    for q in range(2, K.dimension + 1):
        assert (cx.boundary_matrix(K, q - 1) @ cx.boundary_matrix(K, q)).is_zero()


@pytest.mark.parametrize(
    "text",
    ["not json", "{}", '{"simplices": [[0, 0]]}', '{"simplices": [[-1, 2]]}', '{"simplices": []}',
     '{"simplices": [["a"]]}'],
)
def test_malformed_input(text):
    with pytest.raises(cx.ComplexError):
        cx.parse_complex(text)


def test_build_expression_errors():
    with pytest.raises(cx.ComplexError):
        cx.parse_build_expr("klein")
    with pytest.raises(cx.ComplexError):
        cx.parse_build_expr("product(torus,circle")


def test_wedge_keeps_first_summand_labels():
    W = cx.wedge(cx.torus(), cx.circle())
    assert set(cx.torus().simplices[2]) <= set(W.simplices[2])
    assert (0, 9) in W.index[1] and (9, 10) in W.index[1]


def test_projection_maps_are_simplicial():
    A, B = cx.circle(), cx.torus()
    P = cx.product(A, B)
    pa, pb = cx.projection_maps(A, B)
    for s in P.simplices[P.dimension]:
        assert tuple(sorted(set(pa[v] for v in s))) in A.index[len(set(pa[v] for v in s)) - 1]
        assert tuple(sorted(set(pb[v] for v in s))) in B.index[len(set(pb[v] for v in s)) - 1]


def test_disconnected_detection():
    K = cx.from_maximal([(0, 1), (2, 3)])
    assert not K.is_connected
    with pytest.raises(cx.DisconnectedError):
        K.require_connected()
