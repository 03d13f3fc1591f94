"""Alexander–Whitney cup products, integral cohomology bases and cup-lengths.

cl(X, ξ) is the largest k such that w₀ ∪ v₁ ∪ ⋯ ∪ v_k is not a coboundary over
Q(H), where w₀ runs over a basis of twisted cohomology and the v_i over bases of
positive-degree integral cohomology (free part).  Multilinearity makes a search
over basis tuples exhaustive, and graded commutativity lets the factor indices
be taken nondecreasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .complex import SimplicialComplex, boundary_columns, boundary_matrix, product
from .cover import ClassSpec, product_class, zero_class
from .linalg import DEFAULT_SEED, EXACT_COLUMN_LIMIT, IntegerMatrix, integer_invariant_factors, snf_integer
from .novikov import Backend, CochainComplex, cochain_complex

IntCochain = dict  # simplex index -> int


class BudgetExceeded(RuntimeError):
    pass


# --- Alexander–Whitney ------------------------------------------------------------


class CupTable:
    """Front/back face lookup for AW products on one complex."""

    def __init__(self, K: SimplicialComplex):
        self.K = K
        self._splits: dict[tuple[int, int], dict[int, list[tuple[int, int]]]] = {}

    def splits(self, p: int, q: int) -> dict[int, list[tuple[int, int]]]:
        """front index -> [(index of the (p+q)-simplex, back index)]."""
        key = (p, q)
        if key not in self._splits:
            K = self.K
            if p + q > K.dimension:
                raise ValueError(f"cup degree {p}+{q} exceeds dim {K.dimension}")
            fi, bi = K.index[p], K.index[q]
            table: dict[int, list[tuple[int, int]]] = {}
            for t, s in enumerate(K.simplices[p + q]):
                table.setdefault(fi[s[: p + 1]], []).append((t, bi[s[p:]]))
            self._splits[key] = table
        return self._splits[key]

    def cup(self, F, a: dict, p: int, b: dict, q: int) -> dict:
        out = {}
        table = self.splits(p, q)
        for f, x in a.items():
            for t, bk in table.get(f, ()):
                y = b.get(bk)
                if y is not None:
                    out[t] = F.mul(x, y)
        return {k: v for k, v in out.items() if not F.is_zero(v)}


def aw_cup(K: SimplicialComplex, a, p: int, b, q: int) -> dict:
    """(a∪b)(v₀…v_{p+q}) = a(v₀…v_p)·b(v_p…v_{p+q}); cochains as dicts or dense lists."""
    if p + q > K.dimension:
        raise ValueError(f"cup degree {p}+{q} exceeds dim {K.dimension}")
    if not isinstance(a, dict):
        a = {i: x for i, x in enumerate(a) if x}
    if not isinstance(b, dict):
        b = {i: x for i, x in enumerate(b) if x}
    fi, bi = K.index[p], K.index[q]
    out = {}
    for t, s in enumerate(K.simplices[p + q]):
        x = a.get(fi[s[: p + 1]])
        y = b.get(bi[s[p:]])
        if x is not None and y is not None:
            v = x * y
            if v:
                out[t] = v
    return out


# --- integral cohomology ---------------------------------------------------------


@dataclass(frozen=True)
class IntegralCohomologyBasis:
    degree: int
    representatives: tuple[IntCochain, ...]
    method: str  # "snf" | "rational"


def _coboundary_int(K: SimplicialComplex, q: int) -> list[list[int]]:
    """δ^q = ∂_{q+1}ᵀ as dense rows (n_{q+1} × n_q)."""
    if q < 0 or q >= K.dimension:
        return []
    return boundary_matrix(K, q + 1).transpose().tolist()


def _unimodular_inverse(M: IntegerMatrix) -> list[list[int]]:
    n = M.rows
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M.tolist())]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c])
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = [[x for x in row[n:]] for row in A]
    assert all(x.denominator == 1 for row in out for x in row)
    return [[int(x) for x in row] for row in out]


def _snf_basis(K: SimplicialComplex, q: int) -> list[IntCochain]:
    n = K.count(q)
    dq = _coboundary_int(K, q)
    if dq:
        D, _, V = snf_integer(dq)
        k = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])
    else:
        V, k = IntegerMatrix.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n), 0
    # kernel coordinates: columns k.. of V
    Vinv = _unimodular_inverse(V)
    dprev = _coboundary_int(K, q - 1)  # n_q × n_{q-1}
    m = n - k
    if dprev and m:
        ncols = len(dprev[0])
        C = [[sum(Vinv[k + i][s] * dprev[s][j] for s in range(n)) for j in range(ncols)] for i in range(m)]
        D2, U2, _ = snf_integer(C)
        k2 = sum(1 for i in range(min(D2.rows, D2.cols)) if D2[i, i])
        U2inv = _unimodular_inverse(U2)
    else:
        k2 = 0
        U2inv = [[int(i == j) for j in range(m)] for i in range(m)]
    reps = []
    for g in range(k2, m):
        coords = [U2inv[i][g] for i in range(m)]
        vec = {}
        for s in range(n):
            x = sum(V[s, k + i] * coords[i] for i in range(m) if coords[i])
            if x:
                vec[s] = x
        reps.append(vec)
    return reps


def _primitive(vec: dict) -> IntCochain:
    den = 1
    for x in vec.values():
        den = den * x.denominator // gcd(den, x.denominator)
    ints = {k: int(x * den) for k, x in vec.items() if x}
    g = 0
    for x in ints.values():
        g = gcd(g, x)
    return {k: x // g for k, x in ints.items()} if g else {}


def integral_basis(
    K: SimplicialComplex, q: int, method: str = "auto", cc: CochainComplex | None = None
) -> IntegralCohomologyBasis:
    """Integer cocycles whose classes form a basis of H^q(X;ℤ)/torsion ⊗ ℚ.

    ``snf``: Smith forms of the integer coboundaries (a ℤ-basis of the free part).
    ``rational``: cohomology basis over ℚ with denominators cleared, used for
    complexes too large for dense Smith forms.
    """
    if method == "auto":
        sizes = [K.count(d) for d in (q - 1, q, q + 1) if 0 <= d <= K.dimension]
        method = "snf" if max(sizes) <= EXACT_COLUMN_LIMIT // 2 else "rational"
    if method == "snf":
        return IntegralCohomologyBasis(q, tuple(_snf_basis(K, q)), "snf")
    if cc is None or cc.tc.r != 0:
        cc = cochain_complex(zero_class(K), mode="exact")
    reps = tuple(_primitive(v) for v in cc.basis(q))
    return IntegralCohomologyBasis(q, reps, "rational")


def integral_homology(K: SimplicialComplex) -> list[dict]:
    """H_q(K;ℤ) per degree as {"rank": free rank, "torsion": [d > 1, ...]}."""
    out = []
    factors = {}
    for q in range(1, K.dimension + 1):
        cols = [{i: s for i, s in col} for col in boundary_columns(K, q)]
        factors[q] = integer_invariant_factors(cols, K.count(q - 1))
    for q in range(K.dimension + 1):
        rk_q = len(factors.get(q, []))
        inv_next = factors.get(q + 1, [])
        free = K.count(q) - rk_q - len(inv_next)
        out.append({"rank": free, "torsion": sorted(d for d in inv_next if abs(d) > 1)})
    return out


# --- cup-length search -----------------------------------------------------------


@dataclass(frozen=True)
class CupLengthCertificate:
    value: int
    d0: int | None = None
    w0: dict | None = None
    factors: tuple[tuple[int, IntCochain], ...] = ()
    mode: str = "exact"
    point: tuple[Fraction, ...] | None = None
    modulus: int | None = None
    tests: int = 0

    @property
    def product_degree(self) -> int | None:
        if self.d0 is None:
            return None
        return self.d0 + sum(d for d, _ in self.factors)

    def to_json(self, K: SimplicialComplex, backend: Backend | None = None) -> dict:
        def key(q, i):
            return "[" + ",".join(map(str, K.simplices[q][i])) + "]"

        conv = backend.to_json_value if backend else (lambda x: x)
        out = {
            "cl": self.value,
            "d0": self.d0,
            "w0": None if self.w0 is None else {key(self.d0, i): conv(x) for i, x in sorted(self.w0.items())},
            "factors": [
                {"degree": d, "cocycle": {key(d, i): x for i, x in sorted(v.items())}} for d, v in self.factors
            ],
            "mode": self.mode,
            "scope": "one twisted factor w0 times untwisted classes; products of several twisted bundles are not searched",
        }
        if self.point is not None:
            out["evaluation_point"] = [str(x) for x in self.point]
            out["modulus"] = self.modulus
        return out


def _factor_list(K: SimplicialComplex, cc_int: CochainComplex | None = None) -> list[tuple[int, IntCochain]]:
    out = []
    for q in range(1, K.dimension + 1):
        for v in integral_basis(K, q, cc=cc_int).representatives:
            out.append((q, v))
    return out


def _search(
    cc: CochainComplex,
    factors: Sequence[tuple[int, IntCochain]],
    allow_d0_zero: bool,
    max_tests: int | None = None,
) -> CupLengthCertificate:
    K = cc.K
    F = cc.F
    dim = K.dimension
    table = CupTable(K)
    betti = cc.betti_numbers()
    if not any(betti):
        return CupLengthCertificate(-1, mode=cc.backend.mode)
    fvals = [(d, {i: F.from_int(x) for i, x in v.items()}) for d, v in factors]
    best = {"k": -1, "cert": None}
    tests = [0]

    def record(k, d0, w0, chosen):
        if k > best["k"]:
            best["k"] = k
            best["cert"] = (d0, w0, tuple(factors[i] for i in chosen))

    def dfs(prod, deg, start, chosen, d0, w0):
        record(len(chosen), d0, w0, chosen)
        if len(chosen) + (dim - deg) <= best["k"]:
            return
        for i in range(start, len(fvals)):
            d, v = fvals[i]
            if deg + d > dim:
                continue
            nxt = table.cup(F, prod, deg, v, d)
            if not nxt:
                continue
            tests[0] += 1
            if max_tests is not None and tests[0] > max_tests:
                raise BudgetExceeded(f"more than {max_tests} coboundary tests")
            if cc.is_coboundary(deg + d, nxt):
                continue
            dfs(nxt, deg + d, i, chosen + (i,), d0, w0)

    degrees = [q for q in range(dim, -1, -1) if betti[q] and (q > 0 or allow_d0_zero)]
    for d0 in degrees:
        if dim - d0 <= best["k"]:
            continue
        for w0 in cc.basis(d0):
            dfs(w0, d0, 0, (), d0, w0)
    if best["cert"] is None:
        # twisted cohomology only in degree 0 with ξ ≠ 0 cannot happen on connected K
        return CupLengthCertificate(-1, mode=cc.backend.mode, tests=tests[0])
    d0, w0, chosen = best["cert"]
    b = cc.backend
    return CupLengthCertificate(best["k"], d0, w0, chosen, b.mode, b.point, b.modulus, tests[0])


def xi_cup_length(
    spec: ClassSpec,
    mode: str = "auto",
    seed: int = DEFAULT_SEED,
    trials: int = 2,
    max_tests: int | None = None,
    cc: CochainComplex | None = None,
) -> tuple[CupLengthCertificate, CochainComplex]:
    """cl(X, ξ) with a certificate, plus the cochain complex it was computed over."""
    K = spec.complex
    K.require_connected()
    cc = cc or cochain_complex(spec, mode, seed, trials)
    cc_int = cc if spec.r == 0 else None
    factors = _factor_list(K, cc_int)
    cert = _search(cc, factors, allow_d0_zero=spec.r == 0, max_tests=max_tests)
    return cert, cc


def classical_cup_length(K: SimplicialComplex, max_tests: int | None = None) -> tuple[int, CupLengthCertificate]:
    cert, _ = xi_cup_length(zero_class(K), mode="exact", max_tests=max_tests)
    return cert.value, cert


def verify_certificate(spec: ClassSpec, cert: CupLengthCertificate, cc: CochainComplex | None = None) -> bool:
    """Recompute the certificate's product and test it is a cocycle and not a coboundary."""
    if cert.value < 0:
        cc = cc or cochain_complex(spec, "exact" if cert.mode == "exact" else "randomized")
        return not any(cc.betti_numbers())
    if cc is None:
        from .cover import twisted_boundary

        tc = twisted_boundary(spec)
        backend = Backend.exact(spec.r) if cert.mode == "exact" else Backend.evaluation(spec.r, cert.point, cert.modulus)
        cc = CochainComplex(tc, backend)
    if cert.product_degree > spec.complex.dimension:
        return False
    F = cc.F
    table = CupTable(spec.complex)
    prod, deg = dict(cert.w0), cert.d0
    if not cc.is_cocycle(deg, prod):
        return False
    for d, v in cert.factors:
        prod = table.cup(F, prod, deg, {i: F.from_int(x) for i, x in v.items()}, d)
        deg += d
    return cc.is_cocycle(deg, prod) and bool(prod) and not cc.is_coboundary(deg, prod)


# --- Künneth comparison ----------------------------------------------------------


@dataclass
class KunnethReport:
    clX: int
    clY: int
    clXY: int
    product_simplices: int
    modes: list[str] = field(default_factory=list)

    @property
    def inequality_holds(self) -> bool:
        return self.clXY >= self.clX + self.clY

    @property
    def vanishing_factor(self) -> bool:
        """A factor with cl = −1 has no twisted class to multiply; by Künneth the
        product's twisted cohomology then vanishes and clXY = −1."""
        return min(self.clX, self.clY) < 0

    @property
    def consistent(self) -> bool:
        return self.clXY == -1 if self.vanishing_factor else self.inequality_holds

    def to_json(self) -> dict:
        return {
            "clX": self.clX,
            "clY": self.clY,
            "clXY": self.clXY,
            "inequality_holds": self.inequality_holds,
            "vanishing_factor": self.vanishing_factor,
            "consistent": self.consistent,
            "product_simplices": self.product_simplices,
            "mode": self.modes,
        }


class SizeGuardError(ValueError):
    pass


def kunneth_compare(
    spec_x: ClassSpec, spec_y: ClassSpec, budget: int = 20000, mode: str = "auto", seed: int = DEFAULT_SEED
) -> KunnethReport:
    """Compare cl(X×Y, ξ_X×ξ_Y) with cl(X, ξ_X) + cl(Y, ξ_Y) on the staircase product."""
    X, Y = spec_x.complex, spec_y.complex
    P = product(X, Y)
    if P.num_simplices > budget:
        raise SizeGuardError(f"product has {P.num_simplices} simplices, budget is {budget}")
    spec_p = product_class(P, spec_x, spec_y)
    cx, _ = xi_cup_length(spec_x, mode, seed)
    cy, _ = xi_cup_length(spec_y, mode, seed)
    cp, _ = xi_cup_length(spec_p, mode, seed)
    return KunnethReport(cx.value, cy.value, cp.value, P.num_simplices, [cx.mode, cy.mode, cp.mode])
