"""Integral classes ξ given by edge cocycles, the free abelian quotient
H = H₁(X;ℤ)/Ker ξ, and the twisted boundary operators of the corresponding
cover over ℤ[H] = ℤ[t₁^±, …, t_r^±]."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .complex import ComplexError, SimplicialComplex, projection_maps
from .laurent import LaurentPoly
from .linalg import LaurentMatrix, snf_integer

Cochain = tuple[int, ...]  # one integer per edge, in K.simplices[1] order
Tree = tuple[tuple[int, int], ...]


class CocycleError(ComplexError):
    """An input 1-cochain violates the cocycle condition."""


def cocycle_from_values(K: SimplicialComplex, values: Mapping[tuple[int, int], int]) -> Cochain:
    idx = K.index[1] if K.dimension >= 1 else {}
    out = [0] * K.count(1)
    for (u, v), c in values.items():
        if u > v:
            u, v, c = v, u, -c
        if (u, v) not in idx:
            raise ComplexError(f"edge [{u},{v}] is not in the complex")
        out[idx[(u, v)]] = int(c)
    return tuple(out)


def check_cocycle(K: SimplicialComplex, c: Sequence[int]) -> None:
    if K.dimension < 2:
        return
    idx = K.index[1]
    for a, b, d in K.simplices[2]:
        if c[idx[(a, b)]] + c[idx[(b, d)]] - c[idx[(a, d)]]:
            raise CocycleError(f"cocycle condition fails on triangle [{a},{b},{d}]")


def spanning_tree(K: SimplicialComplex, kind: str = "bfs") -> Tree:
    """Spanning tree rooted at the smallest vertex, neighbours scanned increasingly."""
    K.require_connected()
    adj: dict[int, list[int]] = {v: [] for v in K.vertices}
    for u, v in K.simplices[1] if K.dimension >= 1 else ():
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    root = K.vertices[0]
    seen = {root}
    edges = []
    if kind == "bfs":
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    edges.append((min(u, v), max(u, v)))
                    queue.append(v)
    elif kind == "dfs":
        stack = [(root, iter(adj[root]))]
        while stack:
            u, it = stack[-1]
            for v in it:
                if v not in seen:
                    seen.add(v)
                    edges.append((min(u, v), max(u, v)))
                    stack.append((v, iter(adj[v])))
                    break
            else:
                stack.pop()
    else:
        raise ValueError(f"unknown tree kind {kind!r}")
    return tuple(edges)


def tree_potential(K: SimplicialComplex, c: Sequence[int], tree: Tree) -> dict[int, int]:
    """potential(v) = sum of c along the tree path root → v."""
    idx = K.index[1]
    adj: dict[int, list[int]] = {v: [] for v in K.vertices}
    for u, v in tree:
        adj[u].append(v)
        adj[v].append(u)
    root = K.vertices[0]
    pot = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in pot:
                e = idx[(min(u, v), max(u, v))]
                pot[v] = pot[u] + (c[e] if u < v else -c[e])
                queue.append(v)
    if len(pot) != len(adj):
        raise ValueError("tree does not span the complex")
    return pot


def rebase_cochain(K: SimplicialComplex, c: Sequence[int], tree: Tree) -> Cochain:
    """Cohomologous cochain c − δ(potential), vanishing on ``tree``."""
    pot = tree_potential(K, c, tree)
    return tuple(c[i] - (pot[v] - pot[u]) for i, (u, v) in enumerate(K.simplices[1]))


@dataclass(frozen=True)
class ClassSpec:
    """Normalized integral description of ξ.

    ``cocycles`` are r integral 1-cocycles inducing a surjection H₁(X;ℤ) → ℤ^r
    whose kernel is Ker ξ.  ``raw`` keeps the cochains as supplied.
    """

    complex: SimplicialComplex
    r: int
    cocycles: tuple[Cochain, ...]
    raw: tuple[Cochain, ...] = field(default=(), compare=False)

    @property
    def is_zero(self) -> bool:
        return self.r == 0

    @property
    def kernel_note(self) -> str:
        if self.r == 0:
            return "Ker ξ = H₁(X;ℤ) (ξ = 0)"
        return f"Ker ξ = kernel of the evaluation H₁(X;ℤ) → ℤ^{self.r} on the normalized cocycles"

    def edge_values(self) -> list[tuple[int, ...]]:
        """ℤ^r value of ξ on every edge."""
        n = self.complex.count(1)
        return [tuple(c[e] for c in self.cocycles) for e in range(n)]

    def evaluate_cycle(self, cycle: Mapping[tuple[int, int], int]) -> tuple[int, ...]:
        idx = self.complex.index[1]
        out = [0] * self.r
        for (u, v), m in cycle.items():
            sgn = 1
            if u > v:
                u, v, sgn = v, u, -1
            e = idx[(u, v)]
            for i, c in enumerate(self.cocycles):
                out[i] += sgn * m * c[e]
        return tuple(out)

    def in_kernel(self, cycle: Mapping[tuple[int, int], int]) -> bool:
        return not any(self.evaluate_cycle(cycle))

    def to_json(self) -> dict:
        edges = self.complex.simplices[1] if self.complex.dimension >= 1 else ()
        return {
            "cocycles": [
                {f"[{u},{v}]": c[i] for i, (u, v) in enumerate(edges) if c[i]} for c in self.cocycles
            ]
        }


def normalize_class(K: SimplicialComplex, raw_cocycles: Iterable[Sequence[int]]) -> ClassSpec:
    """Reduce raw integral cocycles to a surjection H₁(X;ℤ) → ℤ^r with the same kernel."""
    K.require_connected()
    raw = tuple(tuple(int(x) for x in c) for c in raw_cocycles)
    n_edges = K.count(1)
    for c in raw:
        if len(c) != n_edges:
            raise ComplexError(f"cochain has {len(c)} entries, complex has {n_edges} edges")
        check_cocycle(K, c)
    if not raw or n_edges == 0:
        return ClassSpec(K, 0, (), raw)
    tree = spanning_tree(K)
    rebased = [rebase_cochain(K, c, tree) for c in raw]
    tree_idx = {K.index[1][e] for e in tree}
    loops = [e for e in range(n_edges) if e not in tree_idx]
    if not loops:
        return ClassSpec(K, 0, (), raw)
    # evaluation matrix: rows = raw cocycles, columns = fundamental loops
    E = [[w[e] for e in loops] for w in rebased]
    D, U, _ = snf_integer(E)
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    r = sum(1 for d in diag if d)
    reduced = []
    for i in range(r):
        comb = [sum(U[i, j] * rebased[j][e] for j in range(len(rebased))) for e in range(n_edges)]
        d = diag[i]
        if any(x % d for x in comb):
            raise AssertionError("rebased cocycle not divisible by its invariant factor")
        reduced.append(tuple(x // d for x in comb))
    return ClassSpec(K, r, tuple(reduced), raw)


def parse_class(K: SimplicialComplex, text: str) -> ClassSpec:
    """Read the class-file JSON ``{"cocycles": [{"[u,v]": n, ...}, ...]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"class file is not valid JSON: {exc}") from None
    return parse_class_data(K, data)


def parse_class_data(K: SimplicialComplex, data) -> ClassSpec:
    if not isinstance(data, dict) or not isinstance(data.get("cocycles"), list):
        raise ComplexError("class file must be an object with a 'cocycles' list")
    raw = []
    for entry in data["cocycles"]:
        if not isinstance(entry, dict):
            raise ComplexError("each cocycle must be an object mapping '[u,v]' to an integer")
        values = {}
        for key, val in entry.items():
            try:
                u, v = json.loads(key)
            except (json.JSONDecodeError, TypeError, ValueError):
                raise ComplexError(f"bad edge key {key!r}") from None
            if not isinstance(val, int) or isinstance(val, bool):
                raise ComplexError(f"non-integer cocycle value on {key}")
            if u >= v:
                raise ComplexError(f"edge key {key} must have u < v")
            values[(u, v)] = val
        raw.append(cocycle_from_values(K, values))
    return normalize_class(K, raw)


def load_class(K: SimplicialComplex, path) -> ClassSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_class(K, fh.read())


def zero_class(K: SimplicialComplex) -> ClassSpec:
    K.require_connected()
    return ClassSpec(K, 0, (), ())


def rebase_on_tree(spec: ClassSpec, tree: Tree | str = "bfs") -> tuple[tuple[Cochain, ...], Tree]:
    """Tree-vanishing representative (one cochain per coordinate of ℤ^r) and the tree."""
    K = spec.complex
    if isinstance(tree, str):
        tree = spanning_tree(K, tree)
    w = tuple(rebase_cochain(K, c, tree) for c in spec.cocycles)
    return w, tuple(tree)


def pullback_cochain(
    P: SimplicialComplex, c: Sequence[int], vertex_map: Mapping[int, int], K: SimplicialComplex
) -> Cochain:
    """Pull a 1-cochain on K back along a simplicial vertex map P → K."""
    idx = K.index[1]
    out = []
    for u, v in P.simplices[1]:
        a, b = vertex_map[u], vertex_map[v]
        if a == b:
            out.append(0)
        elif a < b:
            out.append(c[idx[(a, b)]])
        else:
            out.append(-c[idx[(b, a)]])
    return tuple(out)


# --- twisted chain complex ---------------------------------------------------------

Entry = tuple[int, int, tuple[int, ...]]  # (row, sign, exponent in ℤ^r)


@dataclass(frozen=True)
class TwistedComplex:
    """Boundary operators of C_*(X̃) as sparse monomial matrices over ℤ[H].

    ``columns[q][j]`` lists the entries of ∂̃_q applied to the j-th q-simplex.
    """

    complex: SimplicialComplex
    r: int
    w: tuple[tuple[int, ...], ...]  # ℤ^r value per edge
    tree: Tree
    columns: tuple[tuple[tuple[Entry, ...], ...], ...]  # index q (q = 0 is empty)

    def laurent_matrix(self, q: int) -> LaurentMatrix:
        K = self.complex
        if not 1 <= q <= K.dimension:
            return LaurentMatrix(K.count(q - 1) if q >= 1 else 0, K.count(q), self.r, ())
        rows = [[LaurentPoly.zero(self.r)] * K.count(q) for _ in range(K.count(q - 1))]
        for j, col in enumerate(self.columns[q]):
            for i, sgn, e in col:
                rows[i][j] = LaurentPoly.monomial(e, sgn)
        return LaurentMatrix.from_rows(rows, self.r) if rows else LaurentMatrix(0, K.count(q), self.r, ())

    def specialize(self, q: int) -> list[list[int]]:
        """All t_i := 1."""
        K = self.complex
        rows = [[0] * K.count(q) for _ in range(K.count(q - 1))]
        for j, col in enumerate(self.columns[q]):
            for i, sgn, _ in col:
                rows[i][j] += sgn
        return rows


def twisted_boundary(
    spec: ClassSpec, tree: Tree | str = "bfs", w: Sequence[Sequence[int]] | None = None
) -> TwistedComplex:
    """∂̃σ = t^{w(v₀v₁)}·d₀σ + Σ_{i≥1} (−1)^i d_iσ for σ = (v₀ < … < v_q)."""
    K = spec.complex
    if w is None:
        cocycles, tree = rebase_on_tree(spec, tree)
    else:
        cocycles = tuple(tuple(c) for c in w)
        tree = tuple(tree) if not isinstance(tree, str) else ()
    r = spec.r
    edge_w = [tuple(c[e] for c in cocycles) for e in range(K.count(1))]
    eidx = K.index[1] if K.dimension >= 1 else {}
    zero = (0,) * r
    columns: list[tuple] = [()]
    for q in range(1, K.dimension + 1):
        faces = K.index[q - 1]
        cols = []
        for s in K.simplices[q]:
            e0 = edge_w[eidx[(s[0], s[1])]]
            col = [(faces[s[1:]], 1, e0)]
            for i in range(1, q + 1):
                col.append((faces[s[:i] + s[i + 1:]], -1 if i & 1 else 1, zero))
            cols.append(tuple(col))
        columns.append(tuple(cols))
    return TwistedComplex(K, r, tuple(edge_w), tuple(tree), tuple(columns))


def product_class(P: SimplicialComplex, A_spec: ClassSpec, B_spec: ClassSpec) -> ClassSpec:
    """ξ_A × ξ_B on P = product(A, B): both classes pulled back along the projections."""
    pa, pb = projection_maps(A_spec.complex, B_spec.complex)
    raw = [pullback_cochain(P, c, pa, A_spec.complex) for c in A_spec.cocycles]
    raw += [pullback_cochain(P, c, pb, B_spec.complex) for c in B_spec.cocycles]
    return normalize_class(P, raw)
