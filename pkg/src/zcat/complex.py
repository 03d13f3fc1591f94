"""Finite abstract simplicial complexes, their boundary operators and a few
standard constructions (spheres, surfaces, wedges, staircase products)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import combinations
from typing import Iterable, Sequence

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Malformed complex input."""


class DisconnectedError(ComplexError):
    """A class-dependent computation was asked for on a disconnected complex."""


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(rows))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = other.transpose().entries if other.rows else tuple(() for _ in range(other.cols))
        out = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) if cols else ()
            for r in self.entries
        )
        return IntegerMatrix(self.rows, other.cols, out if self.rows else ())

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed complex; ``simplices[q]`` is the sorted list of q-simplices."""

    name: str
    simplices: tuple[tuple[Simplex, ...], ...]
    maximal: tuple[Simplex, ...] = field(default=(), compare=False)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self, q: int) -> int:
        return len(self.simplices[q]) if 0 <= q <= self.dimension else 0

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    @property
    def num_simplices(self) -> int:
        return sum(self.f_vector)

    @cached_property
    def index(self) -> tuple[dict[Simplex, int], ...]:
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v[0] for v in self.simplices[0])

    @cached_property
    def is_connected(self) -> bool:
        verts = self.vertices
        parent = {v: v for v in verts}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u, v in self.simplices[1] if self.dimension >= 1 else ():
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return len({find(v) for v in verts}) == 1

    def require_connected(self) -> None:
        if not self.is_connected:
            raise DisconnectedError(f"complex {self.name!r} is not connected")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "simplices": [list(s) for s in (self.maximal or _maximal_faces(self))],
            "all_simplices": [[list(s) for s in level] for level in self.simplices],
        }


def _maximal_faces(K: SimplicialComplex) -> tuple[Simplex, ...]:
    covered: set[Simplex] = set()
    for level in K.simplices[1:]:
        for s in level:
            covered.update(combinations(s, len(s) - 1))
    return tuple(s for level in K.simplices for s in level if s not in covered)


def from_maximal(simplices: Iterable[Iterable[int]], name: str = "") -> SimplicialComplex:
    """Face closure of the given simplices, canonically sorted."""
    tops = []
    for s in simplices:
        t = tuple(int(v) for v in s)
        if not t:
            raise ComplexError("empty simplex")
        if len(set(t)) != len(t):
            raise ComplexError(f"repeated vertex in simplex {list(t)}")
        if min(t) < 0:
            raise ComplexError(f"negative vertex in simplex {list(t)}")
        tops.append(tuple(sorted(t)))
    if not tops:
        raise ComplexError("empty complex")
    dim = max(len(t) for t in tops) - 1
    levels: list[set[Simplex]] = [set() for _ in range(dim + 1)]
    for t in set(tops):
        if t in levels[len(t) - 1]:
            continue
        for k in range(1, len(t) + 1):
            levels[k - 1].update(combinations(t, k))
    closure = tuple(tuple(sorted(level)) for level in levels)
    K = SimplicialComplex(name, closure)
    return SimplicialComplex(name, closure, _maximal_faces(K))


def parse_complex(text: str) -> SimplicialComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"complex file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "simplices" not in data:
        raise ComplexError("complex file must be an object with a 'simplices' list")
    simplices = data["simplices"]
    if not isinstance(simplices, list) or not all(
        isinstance(s, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in s)
        for s in simplices
    ):
        raise ComplexError("'simplices' must be a list of integer lists")
    return from_maximal(simplices, str(data.get("name", "")))


def serialize_complex(K: SimplicialComplex) -> str:
    return json.dumps(K.to_json())


def load_complex(path) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


# --- boundary operators -------------------------------------------------------


def boundary_columns(K: SimplicialComplex, q: int) -> list[list[tuple[int, int]]]:
    """Sparse ∂_q: for each q-simplex, the list of (face index, sign)."""
    if not 1 <= q <= K.dimension:
        raise ValueError(f"degree {q} out of range 1..{K.dimension}")
    faces = K.index[q - 1]
    cols = []
    for s in K.simplices[q]:
        cols.append([(faces[s[:i] + s[i + 1:]], -1 if i & 1 else 1) for i in range(q + 1)])
    return cols


def boundary_matrix(K: SimplicialComplex, q: int) -> IntegerMatrix:
    cols = boundary_columns(K, q)
    rows = [[0] * len(cols) for _ in range(K.count(q - 1))]
    for j, col in enumerate(cols):
        for i, sign in col:
            rows[i][j] = sign
    return IntegerMatrix(len(rows), len(cols), tuple(tuple(r) for r in rows))


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** q * n for q, n in enumerate(K.f_vector))


# --- constructions ------------------------------------------------------------


def circle() -> SimplicialComplex:
    return from_maximal([(0, 1), (1, 2), (0, 2)], "circle")


def sphere(n: int) -> SimplicialComplex:
    if n < 0:
        raise ComplexError("sphere dimension must be non-negative")
    return from_maximal(combinations(range(n + 2), n + 1), f"sphere({n})")


def torus() -> SimplicialComplex:
    K = product(circle(), circle())
    return SimplicialComplex("torus", K.simplices, K.maximal)


def _relabel(tops: Iterable[Simplex], mapping: dict[int, int]) -> list[Simplex]:
    return [tuple(sorted(mapping[v] for v in s)) for s in tops]


def wedge(A: SimplicialComplex, B: SimplicialComplex, name: str | None = None) -> SimplicialComplex:
    """One-point union identifying vertex 0 of A with vertex 0 of B.

    B's remaining vertices are shifted past A's so that A keeps its labels.
    """
    for X in (A, B):
        X.require_connected()
    offset = max(A.vertices) + 1
    mapping = {v: (0 if v == 0 else v + offset - 1) for v in B.vertices}
    if 0 not in mapping:
        raise ComplexError("wedge needs vertex 0 in both summands")
    tops = list(A.maximal) + _relabel(B.maximal, mapping)
    return from_maximal(tops, name or f"{A.name}∨{B.name}")


def staircase(sa: Simplex, sb: Simplex, nb: int) -> list[Simplex]:
    """Top simplices of the staircase triangulation of sa × sb."""
    p, q = len(sa) - 1, len(sb) - 1
    out = []
    for ups in combinations(range(p + q), q):
        i = j = 0
        verts = [sa[0] * nb + sb[0]]
        up = set(ups)
        for step in range(p + q):
            if step in up:
                j += 1
            else:
                i += 1
            verts.append(sa[i] * nb + sb[j])
        out.append(tuple(verts))
    return out


def product(A: SimplicialComplex, B: SimplicialComplex, name: str | None = None) -> SimplicialComplex:
    """Staircase triangulation of |A|×|B|; vertex (a, b) gets label a·n_B + b."""
    nb = max(B.vertices) + 1
    tops = [s for sa in A.maximal for sb in B.maximal for s in staircase(sa, sb, nb)]
    return from_maximal(tops, name or f"{A.name}×{B.name}")


def projection_maps(A: SimplicialComplex, B: SimplicialComplex) -> tuple[dict[int, int], dict[int, int]]:
    """Vertex maps of the two projections out of ``product(A, B)``."""
    nb = max(B.vertices) + 1
    pa = {a * nb + b: a for a in A.vertices for b in B.vertices}
    pb = {a * nb + b: b for a in A.vertices for b in B.vertices}
    return pa, pb


def connected_sum(A: SimplicialComplex, B: SimplicialComplex, name: str | None = None) -> SimplicialComplex:
    """Connected sum of two closed combinatorial surfaces.

    Removes the last triangle of A and the first triangle of B and glues along
    their boundaries.
    """
    if A.dimension != 2 or B.dimension != 2:
        raise ComplexError("connected sum is only implemented for surfaces")
    ta, tb = A.simplices[2][-1], B.simplices[2][0]
    offset = max(A.vertices) + 1
    mapping = {}
    nxt = offset
    for v in B.vertices:
        if v in tb:
            mapping[v] = ta[tb.index(v)]
        else:
            mapping[v] = nxt
            nxt += 1
    tops = [t for t in A.simplices[2] if t != ta]
    tops += _relabel([t for t in B.simplices[2] if t != tb], mapping)
    return from_maximal(tops, name or f"{A.name}#{B.name}")


def _data_complex(filename: str) -> SimplicialComplex:
    text = resources.files("zcat").joinpath("data", filename).read_text(encoding="utf-8")
    return parse_complex(text)


def surface(g: int) -> SimplicialComplex:
    """Closed orientable surface of genus g (shipped triangulations for g ≤ 3)."""
    if g < 0:
        raise ComplexError("genus must be non-negative")
    if g == 0:
        K = sphere(2)
    elif g == 1:
        K = torus()
    elif g <= 3:
        K = _data_complex(f"genus{g}.json")
    else:
        K = surface(3)
        for _ in range(g - 3):
            K = connected_sum(K, torus())
    return SimplicialComplex(f"surface({g})", K.simplices, K.maximal)


def build_standard(kind: str, *args) -> SimplicialComplex:
    """Dispatch by name: circle, sphere(n), torus, surface(g), wedge(A,B), product(A,B)."""
    if kind == "circle":
        return circle()
    if kind == "sphere":
        return sphere(int(args[0]))
    if kind == "torus":
        return torus()
    if kind == "surface":
        return surface(int(args[0]))
    if kind == "wedge":
        return wedge(*args)
    if kind == "product":
        return product(*args)
    raise ComplexError(f"unknown complex kind {kind!r}")


def parse_build_expr(expr: str) -> SimplicialComplex:
    """Parse expressions like ``product(surface(2),wedge(torus,circle))``."""
    expr = expr.replace(" ", "")
    pos = 0

    def parse() -> SimplicialComplex:
        nonlocal pos
        start = pos
        while pos < len(expr) and (expr[pos].isalnum() or expr[pos] == "_"):
            pos += 1
        kind = expr[start:pos]
        args: list = []
        if pos < len(expr) and expr[pos] == "(":
            pos += 1
            while True:
                if expr[pos].isdigit():
                    s = pos
                    while expr[pos].isdigit():
                        pos += 1
                    args.append(int(expr[s:pos]))
                else:
                    args.append(parse())
                if expr[pos] == ",":
                    pos += 1
                    continue
                if expr[pos] == ")":
                    pos += 1
                    break
                raise ComplexError(f"bad build expression near {expr[pos:]!r}")
        return build_standard(kind, *args)

    try:
        K = parse()
    except IndexError:
        raise ComplexError(f"truncated build expression {expr!r}") from None
    if pos != len(expr):
        raise ComplexError(f"trailing characters in build expression {expr!r}")
    return K
