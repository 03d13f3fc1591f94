"""Certified intervals for cat(X, ξ) and ccat(X, ξ).

Every rule contributes a lower or an upper bound and is tagged with the
invariant it natively bounds.  Lower bounds on cat also bound ccat (ccat ≥ cat);
upper bounds on ccat also bound cat.  Rules whose native target is cat only
(R3, R7, R8) still enter the reported interval, but the interval is then
flagged as not a certified upper bound for ccat, and the product rule refuses
to use such an upper end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .complex import SimplicialComplex, euler_characteristic, load_complex


class AnnotationConflict(ValueError):
    """The rules produced lo > hi; the annotations contradict the computed data."""

    def __init__(self, message: str, rules: Sequence[str]):
        super().__init__(message)
        self.rules = list(rules)


# --- annotations -----------------------------------------------------------------


@dataclass(frozen=True)
class ManifoldAnnotation:
    closed: bool = False
    connected: bool = False
    smooth: bool = False
    dim: int = 0

    @property
    def usable(self) -> bool:
        return self.closed and self.connected and self.smooth


@dataclass(frozen=True)
class BNSAnnotation:
    plus_in_sigma: bool = False
    minus_in_sigma: bool = False


@dataclass(frozen=True)
class ProductFactor:
    """One factor of an asserted staircase product, with its class and annotations."""

    spec: object  # ClassSpec
    annotations: "Annotations"
    label: str = ""


@dataclass(frozen=True)
class Annotations:
    manifold: ManifoldAnnotation | None = None
    bns: BNSAnnotation | None = None
    product_factors: tuple[ProductFactor, ...] | None = None
    wedge_with_circle: SimplicialComplex | None = None  # the Y in X ≃ Y ∨ S¹

    def without(self, name: str) -> "Annotations":
        return Annotations(**{k: (None if k == name else getattr(self, k)) for k in self.__dataclass_fields__})

    @property
    def present(self) -> list[str]:
        return [k for k in self.__dataclass_fields__ if getattr(self, k) is not None]


def parse_annotations(data: dict, base: Path | str = ".") -> Annotations:
    """Annotations from their JSON form; file references resolve against ``base``."""
    from .cover import load_class, zero_class

    base = Path(base)
    unknown = set(data) - {"manifold", "bns", "product_factors", "wedge_with_circle"}
    if unknown:
        raise ValueError(f"unknown annotation keys: {sorted(unknown)}")
    man = data.get("manifold")
    bns = data.get("bns")
    factors = None
    if data.get("product_factors") is not None:
        out = []
        for item in data["product_factors"]:
            K = load_complex(base / item["complex"])
            spec = load_class(K, base / item["class"]) if item.get("class") else zero_class(K)
            sub = item.get("annotations") or {}
            if isinstance(sub, str):
                p = base / sub
                sub = json.loads(p.read_text())
                sub_ann = parse_annotations(sub, p.parent)
            else:
                sub_ann = parse_annotations(sub, base)
            out.append(ProductFactor(spec, sub_ann, item.get("label", item["complex"])))
        factors = tuple(out)
    wedge = None
    if data.get("wedge_with_circle") is not None:
        wedge = load_complex(base / data["wedge_with_circle"]["Y"])
    return Annotations(
        ManifoldAnnotation(**man) if man is not None else None,
        BNSAnnotation(**bns) if bns is not None else None,
        factors,
        wedge,
    )


def load_annotations(path) -> Annotations:
    p = Path(path)
    return parse_annotations(json.loads(p.read_text()), p.parent)


# --- bounds ------------------------------------------------------------------------

# the statement each rule relies on
CITE = {
    "R1": "cat(X,ξ) ≥ cl(X,ξ) + 1",
    "R2": "cat(X,ξ) = 0 implies χ(X) = 0",
    "R3": "cat(X,ξ) ≤ cat(X) − 1 ≤ dim X for ξ ≠ 0",
    "R4": "ccat(M,ξ) ≤ n − 1 for closed connected smooth M, ξ ≠ 0",
    "R5": "ccat(M,ξ) ≤ n − 2 if [ξ] or [−ξ] lies in Σ(π₁M), n ≥ 5",
    "R5b": "ccat(M,ξ) ≤ n − 3 if [ξ] and [−ξ] lie in Σ(π₁M), n ≥ 5",
    "R6": "ccat(X,0) = cat(X,0) = cat(X), and cl(X)+1 ≤ cat(X) ≤ dim X + 1",
    "R7": "cat(Y ∨ S¹, ξ) = cat(Y) − 1 when ξ|_Y = 0, ξ|_{S¹} ≠ 0",
    "R8": "cat(Y × S¹, ξ) = 0 when ξ|_{S¹} ≠ 0",
    "P0": "cat(X₁,ξ₁) = 0 implies cat(X₁ × X₂, ξ) = 0",
    "P1": "ccat(X × Y, ξ) ≤ ccat(X,ξ_X) + ccat(Y,ξ_Y) − 1 when one of them is positive",
    "P2": "cl(X × Y, ξ) ≥ cl(X,ξ|_X) + cl(Y,ξ|_Y)",
}


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    cite: str
    kind: str  # "lower" | "upper" | "note"
    value: int | None
    native: str  # "cat" | "ccat" | "both"
    assumed: tuple[str, ...] = ()
    note: str = ""

    def to_json(self) -> dict:
        out = {"rule": self.rule, "cite": self.cite, "kind": self.kind, "value": self.value,
               "native": self.native, "assumed": list(self.assumed)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class CatBounds:
    lo: int
    hi: int | None  # None: no upper rule applied
    trace: tuple[TraceEntry, ...] = ()
    target: str = "cat,ccat"

    @property
    def hi_bounds_ccat(self) -> bool:
        """Whether the upper end is certified for ccat as well (not just cat)."""
        return any(e.kind == "upper" and e.value == self.hi and e.native in ("ccat", "both") for e in self.trace)

    def contains(self, value: int) -> bool:
        return self.lo <= value and (self.hi is None or value <= self.hi)

    def within(self, other: "CatBounds") -> bool:
        if self.lo < other.lo:
            return False
        if other.hi is None:
            return True
        return self.hi is not None and self.hi <= other.hi

    def to_json(self) -> dict:
        return {"cat_bounds": {"lo": self.lo, "hi": self.hi, "hi_bounds_ccat": self.hi_bounds_ccat,
                               "trace": [e.to_json() for e in self.trace]}}


def _finalize(entries: list[TraceEntry]) -> CatBounds:
    lows = [e for e in entries if e.kind == "lower"]
    ups = [e for e in entries if e.kind == "upper"]
    lo = max([0] + [e.value for e in lows])
    hi = min(e.value for e in ups) if ups else None
    if hi is not None and lo > hi:
        lo_rules = [e.rule for e in lows if e.value == lo]
        hi_rules = [e.rule for e in ups if e.value == hi]
        raise AnnotationConflict(
            f"lower bound {lo} ({', '.join(lo_rules)}) exceeds upper bound {hi} ({', '.join(hi_rules)})",
            lo_rules + hi_rules,
        )
    return CatBounds(lo, hi, tuple(entries))


def _is_circle_like(K: SimplicialComplex) -> bool:
    return K.dimension == 1 and K.is_connected and euler_characteristic(K) == 0


def cat_bounds(
    K: SimplicialComplex,
    r: int,
    cl_value: int,
    ann: Annotations | None = None,
    wedge_cl: int | None = None,
) -> CatBounds:
    """Interval for cat(X, ξ) from the class rank, cl(X, ξ) and annotations.

    ``wedge_cl`` is the classical cup-length of the annotated Y when the
    wedge annotation is present (computed by the caller if omitted).
    """
    ann = ann or Annotations()
    dim = K.dimension
    chi = euler_characteristic(K)
    E: list[TraceEntry] = []
    if r == 0:
        E.append(TraceEntry("R6", CITE["R6"], "lower", cl_value + 1, "both", (), "cat(X,0) = cat(X) ≥ cl(X)+1"))
        E.append(TraceEntry("R6", CITE["R6"], "upper", dim + 1, "both", (), "cat(X) ≤ dim X + 1"))
        return _finalize(E)
    E.append(TraceEntry("R1", CITE["R1"], "lower", cl_value + 1, "cat"))
    if chi != 0:
        E.append(TraceEntry("R2", CITE["R2"], "lower", 1, "cat", (), f"χ = {chi} ≠ 0"))
    E.append(TraceEntry("R3", CITE["R3"], "upper", dim, "cat"))
    m = ann.manifold
    if m is not None and m.usable:
        if m.dim != dim:
            raise AnnotationConflict(f"manifold dimension {m.dim} differs from complex dimension {dim}", ["R4"])
        E.append(TraceEntry("R4", CITE["R4"], "upper", m.dim - 1, "ccat", ("manifold",)))
        b = ann.bns
        if b is not None and m.dim >= 5:
            if b.plus_in_sigma and b.minus_in_sigma:
                E.append(TraceEntry("R5", CITE["R5b"], "upper", m.dim - 3, "ccat", ("manifold", "bns")))
            elif b.plus_in_sigma or b.minus_in_sigma:
                E.append(TraceEntry("R5", CITE["R5"], "upper", m.dim - 2, "ccat", ("manifold", "bns")))
    if ann.wedge_with_circle is not None:
        Y = ann.wedge_with_circle
        if wedge_cl is None:
            from .cup import classical_cup_length

            wedge_cl = classical_cup_length(Y)[0]
        note = "cat(X,ξ) = cat(Y) − 1 with cl(Y)+1 ≤ cat(Y) ≤ dim Y + 1"
        E.append(TraceEntry("R7", CITE["R7"], "lower", wedge_cl, "cat", ("wedge_with_circle",), note))
        E.append(TraceEntry("R7", CITE["R7"], "upper", Y.dimension, "cat", ("wedge_with_circle",), note))
    if _is_circle_like(K):
        E.append(TraceEntry("R8", CITE["R8"], "upper", 0, "cat", (), "X ≃ S¹ and ξ ≠ 0"))
    return _finalize(E)


@dataclass(frozen=True)
class FactorResult:
    bounds: CatBounds
    cl: int
    chi: int
    label: str = ""


def combine_product(factors: Sequence[FactorResult], own: CatBounds | None = None) -> CatBounds:
    """Bounds for a staircase product from bounds of its factors.

    Left-to-right: the accumulated interval and the next factor combine through
    the product inequality when one of them has a positive lower end; any factor
    with interval [0, 0] forces [0, 0].  The result is intersected with ``own``.
    """
    E: list[TraceEntry] = []
    labels = [f.label or f"factor{i}" for i, f in enumerate(factors)]
    zero = [labels[i] for i, f in enumerate(factors) if f.bounds.lo == 0 and f.bounds.hi == 0]
    if zero:
        E.append(TraceEntry("P0", CITE["P0"], "upper", 0, "cat", ("product_factors",), f"cat = 0 on {zero[0]}"))
    else:
        acc_lo, acc_hi, acc_ccat = factors[0].bounds.lo, factors[0].bounds.hi, factors[0].bounds.hi_bounds_ccat
        cl_sum, chi_prod = factors[0].cl, factors[0].chi
        for lab, f in zip(labels[1:], factors[1:]):
            b = f.bounds
            if not (acc_lo > 0 or b.lo > 0):
                E.append(TraceEntry("P1", CITE["P1"], "note", None, "ccat", ("product_factors",),
                                    f"hypothesis (posi) not established before {lab}; step skipped"))
                acc_hi, acc_ccat = None, False
            elif acc_hi is None or b.hi is None or not (acc_ccat and b.hi_bounds_ccat):
                E.append(TraceEntry("P1", CITE["P1"], "note", None, "ccat", ("product_factors",),
                                    f"no ccat upper bound available at {lab}; step skipped"))
                acc_hi, acc_ccat = None, False
            else:
                acc_hi = acc_hi + b.hi - 1
            cl_sum += f.cl
            chi_prod *= f.chi
            acc_lo = max(cl_sum + 1, 1 if chi_prod else 0)
        if acc_hi is not None and acc_ccat:
            E.append(TraceEntry("P1", CITE["P1"], "upper", acc_hi, "ccat", ("product_factors",),
                                "Σ hi_i − (k−1) over the factors"))
        E.append(TraceEntry("P2", CITE["P2"], "lower", cl_sum + 1, "cat", ("product_factors",),
                            "cl(product) ≥ Σ cl_i"))
        if chi_prod:
            E.append(TraceEntry("P3", CITE["R2"], "lower", 1, "cat", ("product_factors",), "χ = Π χ_i ≠ 0"))
    if own is not None:
        E = list(own.trace) + E
    return _finalize(E)


def certified_bounds(spec, ann: Annotations | None = None, mode: str = "auto", seed: int | None = None, trials: int = 2):
    """cl(X, ξ) and the combined interval, recursing into annotated product factors.

    Returns (bounds, cl certificate, list of per-factor results).
    """
    from .cup import xi_cup_length
    from .linalg import DEFAULT_SEED

    ann = ann or Annotations()
    seed = DEFAULT_SEED if seed is None else seed
    cert, _ = xi_cup_length(spec, mode, seed, trials)
    own = cat_bounds(spec.complex, spec.r, cert.value, ann)
    results: list[FactorResult] = []
    if ann.product_factors:
        for pf in ann.product_factors:
            fb, fcert, _ = certified_bounds(pf.spec, pf.annotations, mode, seed, trials)
            results.append(FactorResult(fb, fcert.value, euler_characteristic(pf.spec.complex), pf.label))
        return combine_product(results, own), cert, results
    return own, cert, results
