"""Novikov–Betti numbers b_q(ξ) = dim_{Q(H)} H^q(X; Q(H)), cohomology bases
over Q(H) and coboundary membership.

Cohomology with Q(H) coefficients uses the cochains Hom_{ℤ[H]}(C_*(X̃), Q(H)):
the coboundary δ^q is the transpose of ∂̃_{q+1} with t_i ↦ t_i⁻¹.  Two field
backends realize it: exact arithmetic in Q(H), or evaluation at a random point
of (ℚ^×)^r reduced into 𝔽_p ("probabilistic").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complex import SimplicialComplex
from .cover import ClassSpec, TwistedComplex, twisted_boundary
from .laurent import LaurentPoly, RatFunc
from .linalg import (
    DEFAULT_SEED,
    EXACT_COLUMN_LIMIT,
    MERSENNE61,
    ColumnReduction,
    PrimeField,
    bareiss_rank,
    field_rank,
    fraction_field,
    random_points,
    rational_field,
    reduce_columns,
    to_prime_field,
)

Cochain = dict  # simplex index -> field element


class NotACocycleError(ValueError):
    pass


# --- backends -------------------------------------------------------------------


@dataclass
class Backend:
    """Coefficient field for twisted cochains plus the value of ± t^e in it."""

    F: object
    r: int
    mode: str  # "exact" | "probabilistic"
    point: tuple[Fraction, ...] | None = None
    modulus: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def exact(cls, r: int) -> "Backend":
        return cls(fraction_field(r) if r else rational_field(), r, "exact")

    @classmethod
    def evaluation(cls, r: int, point: Sequence[Fraction], modulus: int = MERSENNE61) -> "Backend":
        return cls(PrimeField(modulus), r, "probabilistic", tuple(point), modulus)

    @property
    def label(self) -> str:
        if self.mode == "exact":
            return "exact"
        pt = ",".join(str(x) for x in self.point or ())
        return f"probabilistic(point=({pt}), p={self.modulus})"

    def monomial(self, sign: int, exp: tuple[int, ...]):
        key = (sign, exp)
        v = self._cache.get(key)
        if v is None:
            if self.mode == "exact":
                if self.r:
                    v = RatFunc.from_poly(LaurentPoly.monomial(exp, sign))
                else:
                    v = Fraction(sign)
            else:
                p = self.modulus
                v = sign % p
                for x, k in zip(self.point, exp):
                    v = v * pow(to_prime_field(x, p), k, p) % p
            self._cache[key] = v
        return v

    def from_int(self, n: int):
        return self.F.from_int(n)

    def to_json_value(self, x):
        if isinstance(x, RatFunc):
            return x.to_string()
        if isinstance(x, Fraction):
            return str(x) if x.denominator != 1 else x.numerator
        return x


def choose_mode(K: SimplicialComplex, mode: str) -> str:
    if mode in ("exact", "randomized"):
        return mode
    if mode != "auto":
        raise ValueError(f"unknown mode {mode!r}")
    return "exact" if max(K.f_vector) <= EXACT_COLUMN_LIMIT else "randomized"


# --- cochain complex over a backend ---------------------------------------------


class CochainComplex:
    """Twisted cochains of (K, ξ) over one backend, with cached reductions.

    ``reduction(q)`` reduces the columns of δ^q (one per q-simplex), tracking
    combinations and clearing the columns paired by δ^{q−1}.  Zero columns that
    survive clearing give a cohomology basis in degree q; the echelon of δ^{q−1}
    decides coboundary membership in degree q.
    """

    def __init__(self, tc: TwistedComplex, backend: Backend):
        self.tc = tc
        self.K = tc.complex
        self.backend = backend
        self.F = backend.F
        self._red: dict[int, ColumnReduction] = {}

    @property
    def dim(self) -> int:
        return self.K.dimension

    def coboundary_columns(self, q: int) -> list[Cochain]:
        """δ^q as columns indexed by q-simplices (entries on (q+1)-simplices)."""
        K = self.K
        cols: list[Cochain] = [dict() for _ in range(K.count(q))]
        if q + 1 > K.dimension or q < 0:
            return cols
        mono = self.backend.monomial
        for j, col in enumerate(self.tc.columns[q + 1]):
            for i, sgn, e in col:
                cols[i][j] = mono(sgn, tuple(-x for x in e))
        return cols

    def reduction(self, q: int) -> ColumnReduction:
        if q not in self._red:
            cleared = self.reduction(q - 1).lows.keys() if q >= 1 else ()
            self._red[q] = reduce_columns(self.F, self.coboundary_columns(q), track=True, cleared=cleared)
        return self._red[q]

    def rank_delta(self, q: int) -> int:
        if q < 0 or q >= self.dim:
            return 0
        return self.reduction(q).rank

    def betti(self, q: int) -> int:
        return self.K.count(q) - self.rank_delta(q) - self.rank_delta(q - 1)

    def betti_numbers(self) -> list[int]:
        return [self.betti(q) for q in range(self.dim + 1)]

    def basis(self, q: int) -> list[Cochain]:
        red = self.reduction(q)
        return [red.kernel[j] for j in red.zero_columns]

    def apply_delta(self, q: int, c: Cochain) -> Cochain:
        """δ^q c, computed directly from the twisted boundary."""
        F = self.F
        mono = self.backend.monomial
        out: Cochain = {}
        if q + 1 > self.dim:
            return out
        for j, col in enumerate(self.tc.columns[q + 1]):
            acc = F.zero
            for i, sgn, e in col:
                v = c.get(i)
                if v is not None and not F.is_zero(v):
                    acc = F.add(acc, F.mul(mono(sgn, tuple(-x for x in e)), v))
            if not F.is_zero(acc):
                out[j] = acc
        return out

    def is_cocycle(self, q: int, c: Cochain) -> bool:
        return not self.apply_delta(q, c)

    def is_coboundary(self, q: int, c: Cochain) -> bool:
        if q == 0:
            return not any(not self.F.is_zero(v) for v in c.values())
        return self.reduction(q - 1).echelon.contains(c)

    def coboundary_witness(self, q: int, c: Cochain) -> Cochain | None:
        if q == 0:
            return {} if all(self.F.is_zero(v) for v in c.values()) else None
        return self.reduction(q - 1).echelon.solve(c)


# --- public operations ----------------------------------------------------------


@dataclass(frozen=True)
class NovikovProfile:
    r: int
    betti: tuple[int, ...]
    mode_flags: tuple[str, ...]

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * b for q, b in enumerate(self.betti))

    def to_json(self) -> dict:
        return {"novikov_betti": list(self.betti), "mode": list(self.mode_flags)}


@dataclass(frozen=True)
class TwistedCochainBasis:
    degree: int
    representatives: tuple[Cochain, ...]
    backend: Backend


def _sparse_eval_rank(tc: TwistedComplex, q: int, point, p: int = MERSENNE61) -> int:
    b = Backend.evaluation(tc.r, point, p)
    cols: list[dict] = []
    for col in tc.columns[q]:
        cols.append({i: b.monomial(sgn, e) for i, sgn, e in col})
    return field_rank(b.F, cols)


def twisted_rank(
    tc: TwistedComplex, q: int, mode: str = "auto", seed: int = DEFAULT_SEED, trials: int = 2
) -> tuple[int, str]:
    """Rank of ∂̃_q over Q(H) from the sparse monomial columns."""
    K = tc.complex
    if not 1 <= q <= K.dimension:
        return 0, "exact"
    if mode == "auto":
        mode = "exact" if K.count(q) <= EXACT_COLUMN_LIMIT else "randomized"
    if tc.r == 0:
        cols = [{i: Fraction(sgn) for i, sgn, _ in col} for col in tc.columns[q]]
        return field_rank(rational_field(), cols), "exact"
    if mode == "exact":
        return bareiss_rank(tc.laurent_matrix(q).entries), "exact"
    best = 0
    for pt in random_points(tc.r, trials, seed):
        best = max(best, _sparse_eval_rank(tc, q, pt))
    return best, "probabilistic"


def novikov_betti(
    spec: ClassSpec,
    mode: str = "auto",
    seed: int = DEFAULT_SEED,
    trials: int = 2,
    tree: str = "bfs",
) -> NovikovProfile:
    """b_q = n_q − rank ∂̃_q − rank ∂̃_{q+1}, ranks over Q(H)."""
    K = spec.complex
    tc = twisted_boundary(spec, tree)
    ranks = [(0, "exact")]
    for q in range(1, K.dimension + 1):
        ranks.append(twisted_rank(tc, q, mode, seed, trials))
    ranks.append((0, "exact"))
    betti = []
    flags = []
    for q in range(K.dimension + 1):
        betti.append(K.count(q) - ranks[q][0] - ranks[q + 1][0])
        flags.append("exact" if ranks[q][1] == ranks[q + 1][1] == "exact" else "probabilistic")
    return NovikovProfile(spec.r, tuple(betti), tuple(flags))


def cochain_complex(
    spec: ClassSpec,
    mode: str = "auto",
    seed: int = DEFAULT_SEED,
    trials: int = 2,
    tree: str = "bfs",
) -> CochainComplex:
    """Cochain complex over the backend selected by ``mode``.

    In randomized mode ``trials`` points are tried and the one with the largest
    total coboundary rank (i.e. the most generic one seen) is kept.
    """
    tc = twisted_boundary(spec, tree)
    mode = choose_mode(spec.complex, mode)
    if mode == "exact" or spec.r == 0:
        return CochainComplex(tc, Backend.exact(spec.r))
    best = None
    for pt in random_points(spec.r, trials, seed):
        cc = CochainComplex(tc, Backend.evaluation(spec.r, pt))
        total = sum(cc.rank_delta(q) for q in range(cc.dim))
        if best is None or total > best[0]:
            best = (total, cc)
    return best[1]


def cohomology_basis(spec: ClassSpec, q: int, mode: str = "auto", seed: int = DEFAULT_SEED) -> TwistedCochainBasis:
    cc = cochain_complex(spec, mode, seed)
    return TwistedCochainBasis(q, tuple(cc.basis(q)), cc.backend)


def is_coboundary(spec: ClassSpec, q: int, cochain: Cochain, mode: str = "exact", cc: CochainComplex | None = None):
    """(True, witness x with δx = cochain) or (False, None)."""
    cc = cc or cochain_complex(spec, mode)
    c = {k: v for k, v in cochain.items() if not cc.F.is_zero(v)}
    if not cc.is_cocycle(q, c):
        raise NotACocycleError(f"input {q}-cochain is not a cocycle")
    x = cc.coboundary_witness(q, c)
    return (x is not None), x
