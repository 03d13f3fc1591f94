"""Exact linear algebra: sparse column reduction over a field, fraction-free
Bareiss rank over Laurent polynomial rings, evaluation ranks, and Smith normal
forms over ℤ and over ℚ[t, t⁻¹]."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .complex import IntegerMatrix
from .laurent import LaurentPoly, RatFunc, monic1, upoly_divmod

MERSENNE61 = (1 << 61) - 1
DEFAULT_SEED = 0xC0FFEE
EXACT_COLUMN_LIMIT = 300

SparseVec = dict  # index -> field element


# --- fields ---------------------------------------------------------------------


class PrimeField:
    """𝔽_p with elements as ints in [0, p)."""

    def __init__(self, p: int = MERSENNE61):
        self.p = p
        self.zero = 0
        self.one = 1

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def from_int(self, n: int) -> int:
        return n % self.p

    def is_zero(self, a: int) -> bool:
        return a == 0

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        return pow(a, -1, self.p)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def axpy(self, y: SparseVec, c: int, x: SparseVec) -> None:
        p = self.p
        get = y.get
        for k, v in x.items():
            w = (get(k, 0) + c * v) % p
            if w:
                y[k] = w
            else:
                del y[k]

    def scale(self, x: SparseVec, c: int) -> SparseVec:
        p = self.p
        return {k: v * c % p for k, v in x.items()}


class GenericField:
    """Field whose elements support Python arithmetic operators."""

    def __init__(self, zero, one):
        self.zero = zero
        self.one = one

    def from_int(self, n: int):
        return self.one * n

    def is_zero(self, a) -> bool:
        return not a

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return self.one / a

    def add(self, a, b):
        return a + b

    def axpy(self, y: SparseVec, c, x: SparseVec) -> None:
        for k, v in x.items():
            w = y[k] + c * v if k in y else c * v
            if w:
                y[k] = w
            else:
                y.pop(k, None)

    def scale(self, x: SparseVec, c) -> SparseVec:
        return {k: v * c for k, v in x.items()}


def rational_field() -> GenericField:
    return GenericField(Fraction(0), Fraction(1))


def fraction_field(nvars: int) -> GenericField:
    return GenericField(RatFunc.constant(0, nvars), RatFunc.constant(1, nvars))


# --- sparse column reduction ------------------------------------------------------


class Echelon:
    """Incremental basis of a subspace, keyed by the largest nonzero index ("low").

    With ``track=True`` every stored vector carries its expression in terms of
    the generators that were fed in, which gives kernels and solution witnesses.
    """

    def __init__(self, F, track: bool = False):
        self.F = F
        self.track = track
        self.pivots: dict[int, SparseVec] = {}
        self.combos: dict[int, SparseVec] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: SparseVec, combo: SparseVec | None = None) -> tuple[SparseVec, SparseVec | None]:
        """Eliminate lows of ``v`` against stored pivots (in place on copies)."""
        F = self.F
        v = dict(v)
        combo = dict(combo) if combo is not None else ({} if self.track else None)
        pivots = self.pivots
        while v:
            low = max(v)
            w = pivots.get(low)
            if w is None:
                break
            c = F.neg(v[low])
            F.axpy(v, c, w)
            if combo is not None:
                F.axpy(combo, c, self.combos[low])
        return v, combo

    def insert(self, v: SparseVec, combo: SparseVec | None = None) -> int:
        """Store an already reduced nonzero vector; returns its low."""
        F = self.F
        low = max(v)
        c = F.inv(v[low])
        self.pivots[low] = F.scale(v, c)
        if self.track:
            self.combos[low] = F.scale(combo or {}, c)
        return low

    def add(self, v: SparseVec, combo: SparseVec | None = None) -> tuple[int | None, SparseVec | None]:
        """Reduce and store. Returns (low, None) or (None, kernel combo)."""
        r, cb = self.reduce(v, combo)
        if r:
            return self.insert(r, cb), None
        return None, cb

    def contains(self, v: SparseVec) -> bool:
        r, _ = self.reduce(v)
        return not r

    def solve(self, v: SparseVec) -> SparseVec | None:
        """Coefficients x over the generators with Σ x_j g_j = v, or None."""
        if not self.track:
            raise ValueError("solve needs a tracking echelon")
        r, combo = self.reduce(v, {})
        if r:
            return None
        F = self.F
        return {k: F.neg(c) for k, c in combo.items()}


@dataclass
class ColumnReduction:
    """Result of reducing the columns of a matrix over a field."""

    rank: int
    echelon: Echelon
    kernel: dict[int, SparseVec] = field(default_factory=dict)  # column -> kernel vector
    lows: dict[int, int] = field(default_factory=dict)  # low row -> column

    @property
    def zero_columns(self) -> list[int]:
        return sorted(self.kernel)


def reduce_columns(
    F,
    columns: Sequence[SparseVec],
    track: bool = False,
    cleared: Iterable[int] = (),
) -> ColumnReduction:
    """Column-by-column reduction; ``cleared`` columns are known to reduce to 0
    and are skipped (their kernel vectors are then not recorded)."""
    ech = Echelon(F, track)
    skip = set(cleared)
    kernel: dict[int, SparseVec] = {}
    lows: dict[int, int] = {}
    for j, col in enumerate(columns):
        if j in skip:
            continue
        low, kv = ech.add(col, {j: F.one} if track else None)
        if low is None:
            if track:
                kernel[j] = kv
            else:
                kernel[j] = {}
        else:
            lows[low] = j
    return ColumnReduction(len(ech), ech, kernel, lows)


def field_rank(F, columns: Sequence[SparseVec]) -> int:
    return reduce_columns(F, columns).rank


# --- Laurent matrices ---------------------------------------------------------


@dataclass(frozen=True)
class LaurentMatrix:
    rows: int
    cols: int
    nvars: int
    entries: tuple[tuple, ...]  # LaurentPoly (or RatFunc) entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], nvars: int | None = None) -> "LaurentMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if nvars is None:
            nvars = next((x.nvars for r in rows for x in r if hasattr(x, "nvars")), 0)
        conv = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            conv.append(
                tuple(x if isinstance(x, (LaurentPoly, RatFunc)) else LaurentPoly.constant(x, nvars) for x in r)
            )
        for r in conv:
            for x in r:
                if x.nvars != nvars:
                    raise ValueError("entries do not share the number of variables")
        return cls(len(conv), ncols, nvars, tuple(conv))

    def column_vectors(self) -> list[dict]:
        cols = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self.entries):
            for j, x in enumerate(r):
                if x:
                    cols[j][i] = x
        return cols

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.cols, self.rows, self.nvars, tuple(zip(*self.entries)) if self.rows else ())

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = LaurentPoly.zero(self.nvars)
        out = []
        for r in self.entries:
            row = []
            for j in range(other.cols):
                acc = zero
                for k, a in enumerate(r):
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return LaurentMatrix(self.rows, other.cols, self.nvars, tuple(out))

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def evaluate(self, point: Sequence, modulus: int | None = None) -> list[list]:
        return [[x.evaluate(point, modulus) if x else 0 for x in r] for r in self.entries]


def bareiss_rank(rows: Sequence[Sequence[LaurentPoly]]) -> int:
    """Rank over the fraction field by fraction-free (Bareiss) elimination.

    Every row is first divided by its unit monomial and scalar content; the
    elimination itself only performs exact divisions by the previous pivot.
    """
    m = []
    for r in rows:
        nz = [x for x in r if x]
        if not nz:
            continue
        shift = tuple(-min(col) for col in zip(*(e for x in nz for e in x.terms)))
        content = Fraction(0)
        for x in nz:
            content = _frac_gcd(content, x.content())
        m.append([x.shift(shift) * (1 / content) if x else x for x in r])
    if not m:
        return 0
    ncols = len(m[0])
    nrows = len(m)
    zero = LaurentPoly.zero(m[0][0].nvars)
    prev = LaurentPoly.constant(1, zero.nvars)
    rank = 0
    col_order = list(range(ncols))
    for c in col_order:
        if rank == nrows:
            break
        piv = None
        best = None
        for i in range(rank, nrows):
            x = m[i][c]
            if x:
                size = len(x.terms)
                if best is None or size < best:
                    piv, best = i, size
                    if size == 1:
                        break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][c]
        row_p = m[rank]
        trivial_prev = prev == 1
        for i in range(rank + 1, nrows):
            a = m[i][c]
            row_i = m[i]
            for j in range(c + 1, ncols):
                v = row_i[j] * p if row_i[j] else row_i[j]
                if a and row_p[j]:
                    v = v - row_p[j] * a
                if v and not trivial_prev:
                    v = v.exact_div(prev)
                row_i[j] = v
            row_i[c] = zero
        prev = p
        rank += 1
    return rank


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd, lcm

    a, b = Fraction(a), Fraction(b)
    if not a:
        return abs(b)
    if not b:
        return abs(a)
    return Fraction(gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator))


@dataclass(frozen=True)
class RankResult:
    rank: int
    mode: str  # "exact" | "probabilistic"


def random_points(nvars: int, trials: int, seed: int = DEFAULT_SEED) -> list[tuple[Fraction, ...]]:
    """Evaluation points with coordinates p/q, 1 ≤ p, q ≤ 10⁶."""
    rng = random.Random(seed)
    return [
        tuple(Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6)) for _ in range(nvars))
        for _ in range(trials)
    ]


def to_prime_field(x: Fraction, p: int = MERSENNE61) -> int:
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def evaluation_rank(M: LaurentMatrix, point: Sequence[Fraction], p: int = MERSENNE61) -> int | None:
    """Rank of M(point) over 𝔽_p; None if the point is a pole of an entry."""
    pt = [to_prime_field(x, p) for x in point]
    F = PrimeField(p)
    cols: list[dict] = [dict() for _ in range(M.cols)]
    for i, r in enumerate(M.entries):
        for j, x in enumerate(r):
            if x:
                try:
                    v = x.evaluate(pt, p)
                except ZeroDivisionError:
                    return None
                if v:
                    cols[j][i] = v
    return field_rank(F, cols)


def rank_fraction_field(
    M: LaurentMatrix | Sequence[Sequence],
    mode: str = "auto",
    seed: int = DEFAULT_SEED,
    trials: int = 2,
) -> RankResult:
    """Rank over Q(H).

    ``exact``: Bareiss (polynomial entries) or Gaussian elimination in Q(H)
    (rational-function entries). ``randomized``: max over ``trials`` evaluation
    ranks at random rational points, reduced modulo 2⁶¹−1. ``auto`` picks exact
    up to ``EXACT_COLUMN_LIMIT`` columns.
    """
    if not isinstance(M, LaurentMatrix):
        M = LaurentMatrix.from_rows(M)
    if mode == "auto":
        mode = "exact" if M.cols <= EXACT_COLUMN_LIMIT else "randomized"
    if M.rows == 0 or M.cols == 0:
        return RankResult(0, "exact")
    if mode == "exact" or M.nvars == 0:
        if any(isinstance(x, RatFunc) for r in M.entries for x in r):
            return RankResult(field_rank(fraction_field(M.nvars), M.column_vectors()), "exact")
        return RankResult(bareiss_rank(M.entries), "exact")
    if mode != "randomized":
        raise ValueError(f"unknown rank mode {mode!r}")
    best = 0
    rng_seed = seed
    done = 0
    while done < trials:
        (pt,) = random_points(M.nvars, 1, rng_seed)
        rng_seed += 1
        r = evaluation_rank(M, pt)
        if r is None:
            continue
        best = max(best, r)
        done += 1
    return RankResult(best, "probabilistic")


def solve_linear(M: LaurentMatrix | Sequence[Sequence], b: Sequence) -> list[RatFunc] | None:
    """Some x with M·x = b over Q(H), or None when the system is inconsistent."""
    if not isinstance(M, LaurentMatrix):
        M = LaurentMatrix.from_rows(M)
    nv = M.nvars
    F = fraction_field(nv)

    def lift(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, LaurentPoly):
            return RatFunc.from_poly(x)
        return RatFunc.constant(x, nv)

    cols = [{i: lift(x) for i, x in c.items()} for c in M.column_vectors()]
    ech = Echelon(F, track=True)
    for j, c in enumerate(cols):
        ech.add(c, {j: F.one})
    rhs = {i: lift(x) for i, x in enumerate(b) if x}
    if len(b) != M.rows:
        raise ValueError("right-hand side has the wrong length")
    sol = ech.solve(rhs)
    if sol is None:
        return None
    return [sol.get(j, F.zero) for j in range(M.cols)]


# --- Smith normal form over ℤ --------------------------------------------------


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf_integer(M: IntegerMatrix | Sequence[Sequence[int]]) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """(D, U, V) with D = U·M·V, U and V unimodular, D = diag(d₁ | d₂ | …)."""
    if isinstance(M, IntegerMatrix):
        rows, ncols = M.tolist(), M.cols
    else:
        rows = [list(map(int, r)) for r in M]
        ncols = len(rows[0]) if rows else 0
    m, n = len(rows), ncols
    A = [r[:] for r in rows]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k·row_src
        if k:
            A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):  # col_dst += k·col_src
        if k:
            for r in A:
                r[dst] += k * r[src]
            for r in V:
                r[dst] += k * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return (
        IntegerMatrix.from_rows(A, n),
        IntegerMatrix.from_rows(U, m),
        IntegerMatrix.from_rows(V, n),
    )


def integer_invariant_factors(columns: Sequence[dict[int, int]], nrows: int) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix.

    Unit pivots are eliminated sparsely first; the leftover core goes through
    the dense Smith form.
    """
    cols = [dict(c) for c in columns if c]
    units = 0
    row_index: dict[int, set[int]] = {}
    for j, c in enumerate(cols):
        for i in c:
            row_index.setdefault(i, set()).add(j)
    alive = set(range(len(cols)))
    progress = True
    while progress:
        progress = False
        for j in sorted(alive):
            if j not in alive:
                continue
            c = cols[j]
            if not c:
                alive.discard(j)
                continue
            piv = next((i for i, v in c.items() if v in (1, -1)), None)
            if piv is None:
                continue
            # eliminate row `piv` from every other column, then drop row and column
            pv = c[piv]
            for k in list(row_index.get(piv, ())):
                if k == j or k not in alive:
                    continue
                ck = cols[k]
                f = ck.get(piv, 0) * pv  # pv = ±1 so pv⁻¹ = pv
                if not f:
                    continue
                for i, v in c.items():
                    w = ck.get(i, 0) - f * v
                    if w:
                        if i not in ck:
                            row_index.setdefault(i, set()).add(k)
                        ck[i] = w
                    else:
                        ck.pop(i, None)
                        row_index[i].discard(k)
            for i in c:
                row_index[i].discard(j)
            row_index.pop(piv, None)
            alive.discard(j)
            units += 1
            progress = True
    core_cols = [cols[j] for j in sorted(alive) if cols[j]]
    if not core_cols:
        return [1] * units
    rows_used = sorted({i for c in core_cols for i in c})
    pos = {i: k for k, i in enumerate(rows_used)}
    dense = [[0] * len(core_cols) for _ in rows_used]
    for j, c in enumerate(core_cols):
        for i, v in c.items():
            dense[pos[i]][j] = v
    D, _, _ = snf_integer(dense)
    diag = [D[k, k] for k in range(min(D.rows, D.cols)) if D[k, k]]
    return [1] * units + diag


# --- Smith normal form over ℚ[t, t⁻¹] -------------------------------------------


def _span(p: LaurentPoly) -> int:
    return p.degree()


def _laurent_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Euclidean division in ℚ[t^±] with respect to the exponent span."""
    ca, va = a.coeff_list()
    cb, vb = b.coeff_list()
    q, r = upoly_divmod(ca, cb)
    return LaurentPoly.from_coeffs(q, va - vb), LaurentPoly.from_coeffs(r, va)


def snf_laurent_pid(M: LaurentMatrix | Sequence[Sequence]) -> list[LaurentPoly]:
    """Invariant factors e₁ | e₂ | … of M over ℚ[t^±] (monic, t-valuation 0).

    The list has length min(rows, cols); rank deficiency shows up as zeros.
    """
    if not isinstance(M, LaurentMatrix):
        M = LaurentMatrix.from_rows(M, 1)
    if M.nvars != 1:
        raise ValueError("snf_laurent_pid needs a univariate matrix")
    m, n = M.rows, M.cols
    A = [list(r) for r in M.entries]
    zero = LaurentPoly.zero(1)
    diag: list[LaurentPoly] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x:
                    s = _span(x)
                    if best is None or s < best[0]:
                        best = (s, i, j)
                        if s == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    q, rem = _laurent_divmod(x, p)
                    A[i] = [a - q * b if b else a for a, b in zip(A[i], A[t])]
                    if rem:
                        A[t], A[i] = A[i], A[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                x = A[t][j]
                if x:
                    q, rem = _laurent_divmod(x, p)
                    for r in A:
                        if r[t]:
                            r[j] = r[j] - q * r[t]
                    if rem:
                        for r in A:
                            r[t], r[j] = r[j], r[t]
                        changed = True
                        break
            if changed:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] and _laurent_divmod(A[i][j], p)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        diag.append(monic1(A[t][t]))
        t += 1
    diag += [zero] * (min(m, n) - len(diag))
    return diag
