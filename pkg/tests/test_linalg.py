from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, strategies as st

from zcat.complex import IntegerMatrix
from zcat.laurent import LaurentPoly, RatFunc
from zcat.linalg import (
    LaurentMatrix,
    bareiss_rank,
    integer_invariant_factors,
    rank_fraction_field,
    snf_integer,
    snf_laurent_pid,
    solve_linear,
)

T = sympy.Symbol("t")
t = LaurentPoly.variable(0, 1)
one = LaurentPoly.constant(1, 1)


def to_sympy(p: LaurentPoly, names=(T,)):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[n**k for n, k in zip(names, e)])
               for e, c in ((e, Fraction(c)) for e, c in p.terms.items()))


def sympy_rank(rows, names=(T,)):
    return sympy.Matrix([[to_sympy(x, names) for x in r] for r in rows]).rank(simplify=True)


small_ints = st.integers(-3, 3)
int_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n),
                                                          min_size=m, max_size=m))
)


@given(int_matrices)
def test_snf_integer_identity(rows):
    M = IntegerMatrix.from_rows(rows)
    D, U, V = snf_integer(M)
    assert U @ M @ V == D
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    nz = [d for d in diag if d]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert all(D[i, j] == 0 for i in range(D.rows) for j in range(D.cols) if i != j)
    assert abs(round(sympy.Matrix(U.tolist()).det())) == 1
    assert abs(round(sympy.Matrix(V.tolist()).det())) == 1
    assert len(nz) == sympy.Matrix(rows).rank()


@given(int_matrices)
def test_sparse_invariant_factors_match_dense(rows):
    D, _, _ = snf_integer(rows)
    dense = [abs(D[i, i]) for i in range(min(D.rows, D.cols)) if D[i, i]]
    cols = [{i: rows[i][j] for i in range(len(rows)) if rows[i][j]} for j in range(len(rows[0]))]
    assert sorted(integer_invariant_factors(cols, len(rows))) == sorted(dense)


def test_snf_two_by_two_oracle():
    # d1 = gcd of entries, d1·d2 = |det|
    rows = [[2, 4], [6, 8]]
    D, _, _ = snf_integer(rows)
    g = gcd(*[x for r in rows for x in r])
    assert (D[0, 0], D[1, 1]) == (g, abs(2 * 8 - 4 * 6) // g)


def test_rank_against_sympy_circle():
    rows = [[one, t * 0, -one], [-one, one, t * 0], [t * 0, -one, t]]
    assert bareiss_rank(rows) == sympy_rank(rows) == 3
    det = sympy.Matrix([[to_sympy(x) for x in r] for r in rows]).det()
    assert sympy.simplify(det - (T - 1)) == 0


@st.composite
def laurent_matrices(draw, nvars=1):
    m, n = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    entry = st.dictionaries(st.tuples(*[st.integers(-1, 2)] * nvars), st.integers(-2, 2), max_size=2)
    return [[LaurentPoly(nvars, draw(entry)) for _ in range(n)] for _ in range(m)]


@given(laurent_matrices())
def test_bareiss_matches_sympy(rows):
    # multiply by a high power of t to clear negative exponents for sympy
    assert bareiss_rank(rows) == sympy_rank([[x * t**2 for x in r] for r in rows])


@given(laurent_matrices(2), st.integers(0, 2**32))
def test_randomized_rank_agrees_with_exact(rows, seed):
    M = LaurentMatrix.from_rows(rows, 2)
    exact = rank_fraction_field(M, "exact")
    rand = rank_fraction_field(M, "randomized", seed=seed, trials=3)
    assert exact.mode == "exact" and rand.mode == "probabilistic"
    assert rand.rank == exact.rank


def test_randomized_never_exceeds_exact():
    # rank drops at t = 1 only; evaluation can only lose rank
    rows = [[t - 1, one * 0], [one * 0, t * t - 1]]
    M = LaurentMatrix.from_rows(rows, 1)
    assert rank_fraction_field(M, "randomized", trials=1).rank <= rank_fraction_field(M, "exact").rank == 2


@given(laurent_matrices(), st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_solve_linear_consistent_rhs(rows, xs):
    n = len(rows[0])
    x = [LaurentPoly.constant(v, 1) * (t + v) for v in xs[:n]]
    b = [sum((a * y for a, y in zip(r, x)), t * 0) for r in rows]
    sol = solve_linear(rows, b)
    assert sol is not None
    for r, rhs in zip(rows, b):
        acc = RatFunc.constant(0, 1)
        for a, y in zip(r, sol):
            acc = acc + RatFunc.from_poly(a) * y
        assert acc == RatFunc.from_poly(rhs)


def test_solve_linear_polynomial_division():
    # (t²−1)·x = t−1  ⇒  x = 1/(t+1)
    sol = solve_linear([[t * t - 1]], [t - 1])
    assert sol == [RatFunc(one, t + 1)]
    assert solve_linear([[one], [one]], [one, one * 2]) is None


def test_laurent_pid_circle():
    rows = [[one, t * 0, -one], [-one, one, t * 0], [t * 0, -one, t]]
    assert snf_laurent_pid(rows) == [one, one, t - 1]


def test_laurent_pid_units_are_normalized():
    rows = [[t**-3 * 2, t * 0], [t * 0, (t - 1) * t**5 * -3]]
    assert snf_laurent_pid(rows) == [one, t - 1]


@given(laurent_matrices())
def test_laurent_pid_divisibility_and_determinant(rows):
    fac = snf_laurent_pid(rows)
    nz = [f for f in fac if f]
    for a, b in zip(nz, nz[1:]):
        assert a.divides(b)
    assert len(nz) == bareiss_rank(rows)
    if len(rows) == len(rows[0]) and len(nz) == len(rows):
        det = sympy.Matrix([[to_sympy(x * t**2) for x in r] for r in rows]).det()
        prod = one
        for f in nz:
            prod = prod * f
        ratio = sympy.cancel(det / to_sympy(prod * t**10))
        # det / Π e_i is a unit c·t^k
        assert sympy.Poly(sympy.numer(ratio), T).is_monomial
        assert sympy.Poly(sympy.denom(ratio), T).is_monomial


def test_empty_matrix_rank():
    assert rank_fraction_field(LaurentMatrix(0, 3, 1, ())).rank == 0


@pytest.mark.parametrize("mode", ["exact", "randomized"])
def test_rational_function_entries(mode):
    r = RatFunc(one, t + 1)
    rows = [[r, RatFunc.from_poly(one)], [RatFunc.from_poly(one), RatFunc.from_poly(t + 1)]]
    assert rank_fraction_field(rows, mode).rank == 1
