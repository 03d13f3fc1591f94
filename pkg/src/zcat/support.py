"""Torsion of the infinite cyclic cover for rank-1 classes.

Over the PID ℚ[t^±], C_q/im ∂̃_{q+1} splits as ker ∂̃_q / im ∂̃_{q+1} plus a free
module, so the torsion of H_q(X̃;ℚ) is read off the non-unit invariant factors
of ∂̃_{q+1}.  Δ_q is their product; bundles with Δ_q(x) ≠ 0 for every q avoid
the support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cover import ClassSpec, twisted_boundary
from .laurent import LaurentPoly, laurent_gcd1
from .linalg import snf_laurent_pid


class UnsupportedRank(ValueError):
    """Support computations are implemented for rank-1 classes only."""


@dataclass(frozen=True)
class SupportProfile:
    delta: tuple[LaurentPoly, ...]  # Δ_0, …, Δ_n
    invariant_factors: tuple[tuple[LaurentPoly, ...], ...]  # non-unit factors per degree
    free_ranks: tuple[int, ...]

    @property
    def torsion_ranks(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.invariant_factors)

    @property
    def contains_trivial_bundle(self) -> bool:
        return any(d.evaluate((1,)) == 0 for d in self.delta)

    def to_json(self) -> dict:
        return {
            "support": {
                "rank": 1,
                "delta": [d.to_string() for d in self.delta],
                "torsion_ranks": list(self.torsion_ranks),
                "free_ranks": list(self.free_ranks),
                "trivial_in_support": self.contains_trivial_bundle,
            }
        }


def torsion_annihilators(spec: ClassSpec, tree="bfs") -> SupportProfile:
    if spec.r != 1:
        raise UnsupportedRank(f"unsupported: rank>1 (rank {spec.r})" if spec.r > 1 else "unsupported: rank 0")
    K = spec.complex
    K.require_connected()
    tc = twisted_boundary(spec, tree)
    n = K.dimension
    diag: dict[int, list[LaurentPoly]] = {}
    for q in range(1, n + 1):
        diag[q] = snf_laurent_pid(tc.laurent_matrix(q))
    deltas, factors, free = [], [], []
    one = LaurentPoly.constant(1, 1)
    for q in range(n + 1):
        nxt = [e for e in diag.get(q + 1, []) if e and not e.is_constant()]
        d = one
        for e in nxt:
            d = d * e
        deltas.append(d)
        factors.append(tuple(nxt))
        rank_q = sum(1 for e in diag.get(q, []) if e)
        rank_next = sum(1 for e in diag.get(q + 1, []) if e)
        free.append(K.count(q) - rank_q - rank_next)
    return SupportProfile(tuple(deltas), tuple(factors), tuple(free))


def degree0_annihilator(spec: ClassSpec, tree="bfs") -> LaurentPoly:
    """Δ_0 without a Smith form of ∂̃_1.

    With w rebased to vanish on the tree, the tree columns of ∂̃_1 are unit
    pivots identifying all vertices, and every other edge reduces to
    (t^{w(e)} − 1) times the root.  So H_0(X̃) = ℚ[t^±]/gcd_e(t^{w(e)} − 1).
    """
    if spec.r != 1:
        raise UnsupportedRank(f"unsupported: rank>1 (rank {spec.r})" if spec.r > 1 else "unsupported: rank 0")
    spec.complex.require_connected()
    tc = twisted_boundary(spec, tree)
    g = LaurentPoly.zero(1)
    one = LaurentPoly.constant(1, 1)
    for (k,) in tc.w:
        if k:
            g = laurent_gcd1(g, LaurentPoly.monomial((k,)) - one)
    return g


def trivial_bundle_in_support(spec: ClassSpec) -> bool:
    """Membership of the trivial bundle, certified by Δ_0(1) = 0 when possible."""
    if degree0_annihilator(spec).evaluate((1,)) == 0:
        return True
    return torsion_annihilators(spec).contains_trivial_bundle


def is_generic_bundle(profile: SupportProfile, x) -> bool:
    """True iff Δ_q(x) ≠ 0 for all q (then the bundle with monodromy x avoids the support)."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("monodromy must be nonzero")
    return all(d.evaluate((x,)) != 0 for d in profile.delta)
