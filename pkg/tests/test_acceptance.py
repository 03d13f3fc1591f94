"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary (see conftest.py).  Run with ``pytest tests/test_acceptance.py -s``
or ``python scripts/run_acceptance.py``.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager

from zcat import complex as cx
from zcat.bounds import Annotations, ManifoldAnnotation, load_annotations, certified_bounds
from zcat.cli import sweep
from zcat.cover import load_class, spanning_tree, twisted_boundary, zero_class
from zcat.cup import (
    classical_cup_length,
    integral_homology,
    kunneth_compare,
    verify_certificate,
    xi_cup_length,
)
from zcat.laurent import LaurentPoly
from zcat.linalg import EXACT_COLUMN_LIMIT
from zcat.novikov import novikov_betti, twisted_rank
from zcat.support import torsion_annihilators, trivial_bundle_in_support

from .conftest import FIXTURES, class_from_coeffs, complex_named, random_tree
from .test_novikov import CORPUS

RESULTS: list[str] = []

t = LaurentPoly.variable(0, 1)
one = LaurentPoly.constant(1, 1)


def load(complex_file, class_file=None):
    K = cx.load_complex(FIXTURES / complex_file)
    return load_class(K, FIXTURES / class_file) if class_file else zero_class(K)


@contextmanager
def criterion(number: int, title: str):
    """Run a criterion body; record and print exactly one PASS/FAIL line."""
    start = time.perf_counter()
    state = {"detail": ""}
    try:
        yield state
    except AssertionError as exc:
        line = f"FAIL criterion {number}: {title} ({time.perf_counter() - start:.1f}s) {exc}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"PASS criterion {number}: {title} ({time.perf_counter() - start:.1f}s) {state['detail']}"
    RESULTS.append(line)
    print(line)


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


# products computed along the way, for the product inequality check in criterion 7
PRODUCTS: list[tuple[str, int, int, int]] = []


def test_criterion_1_wedge_regimes():
    with criterion(1, "T²∨S¹ cup-length 0/1/2 and lower bounds 1/2/3") as st:
        got = []
        for cls, cl_exp, lo_exp in [("xi_not_in_ell.json", 0, 1), ("xi_in_ell.json", 1, 2), (None, 2, 3)]:
            spec = load("wedge_t2_s1.json", cls)
            (b, cert, _), dt = timed(certified_bounds, spec, None, "exact")
            assert cert.value == cl_exp, f"{cls}: cl {cert.value} != {cl_exp}"
            assert b.lo == lo_exp, f"{cls}: lower bound {b.lo} != {lo_exp}"
            assert dt <= 10, f"{cls}: {dt:.1f}s > 10s"
            assert verify_certificate(spec, cert)
            got.append((cert.value, b.lo, b.hi))
        st["detail"] = f"(cl, lo, hi) = {got}"


def test_criterion_2_surface_products():
    with criterion(2, "Σ₂ → [1,1]; Σ₂×Σ₂ → [1,1], [3,3], [5,5]") as st:
        man = Annotations(manifold=ManifoldAnnotation(True, True, True, 2))
        b, cert, _ = certified_bounds(load("genus2.json", "xi_primitive.json"), man, "exact")
        assert (b.lo, b.hi) == (1, 1), f"Σ₂: [{b.lo},{b.hi}]"
        assert cert.mode == "exact"
        got = {}
        for tag, expected, r in [("both", (1, 1), 0), ("first", (3, 3), 1), ("zero", (5, 5), 2)]:
            spec = load("genus2_squared.json", f"xi_g2sq_{tag}.json")
            ann = load_annotations(FIXTURES / f"ann_g2sq_{tag}.json")
            (res, dt) = timed(certified_bounds, spec, ann, "randomized")
            b, cert, factors = res
            assert (b.lo, b.hi) == expected, f"{tag}: [{b.lo},{b.hi}] != {list(expected)}"
            assert expected[0] == 1 + 2 * r
            assert dt <= 600, f"{tag}: {dt:.0f}s > 600s"
            assert verify_certificate(spec, cert)
            cls = [f.cl for f in factors]
            PRODUCTS.append((f"Σ₂×Σ₂ {tag}", cls[0], cls[1], cert.value))
            got[tag] = (b.lo, b.hi, cert.value, round(dt, 1))
        # factor cup-lengths are exact computations on the surface
        c1, _ = xi_cup_length(load("genus2.json", "xi_primitive.json"), "exact")
        c0, _ = xi_cup_length(load("genus2.json"), "exact")
        assert (c1.value, c0.value, c1.mode, c0.mode) == (0, 2, "exact", "exact")
        # the rank ≤ 1 product cup-lengths are also reproduced in exact arithmetic
        for tag, cl_exp in [("first", 2), ("zero", 4)]:
            c, _ = xi_cup_length(load("genus2_squared.json", f"xi_g2sq_{tag}.json"), "exact")
            assert (c.value, c.mode) == (cl_exp, "exact"), f"exact {tag}: {c.value}"
        st["detail"] = f"(lo, hi, cl, seconds) = {got}"


def test_criterion_3_wedge_squared_sweep():
    with criterion(3, "(T²∨S¹)² sweep: cl = a+2b, lo = 1+a+2b") as st:
        K = cx.load_complex(FIXTURES / "wedge_squared.json")
        fam = json.loads((FIXTURES / "wedge_squared_family.json").read_text())
        counts = {c["id"]: (c["a"], c["b"]) for c in fam["classes"]}
        table, dt = timed(sweep, K, fam)
        assert dt <= 900, f"{dt:.0f}s > 900s"
        assert len(table["rows"]) == 9
        for row in table["rows"]:
            assert "error" not in row, row
            a, b = counts[row["id"]]
            assert row["cl"] == a + 2 * b, f"{row['id']}: cl {row['cl']} != {a + 2 * b}"
            assert row["lo"] == 1 + a + 2 * b, f"{row['id']}: lo {row['lo']}"
        regime_cl = {"not_in_ell": 0, "in_ell": 1, "zero": 2}
        for row in table["rows"]:
            n1, n2 = row["id"].split("x", 1)
            PRODUCTS.append((f"(T²∨S¹)² {row['id']}", regime_cl[n1], regime_cl[n2], row["cl"]))
        st["detail"] = f"{len(table['rows'])} rows in {dt:.0f}s, groups {[(g['cl'], g['lo'], g['hi']) for g in table['groups']]}"


def test_criterion_4_novikov_betti():
    with criterion(4, "Novikov–Betti numbers of circle, torus, Σ₂, Σ₃") as st:
        cases = [
            ("circle.json", "xi_circle.json", (0, 0)),
            ("torus.json", "xi_torus_primitive.json", (0, 0, 0)),
            ("torus.json", "xi_rank2.json", (0, 0, 0)),
            ("genus2.json", "xi_primitive.json", (0, 2, 0)),
            ("genus3.json", "xi_genus3.json", (0, 4, 0)),
        ]
        got = []
        for K, cls, expected in cases:
            prof, dt = timed(novikov_betti, load(K, cls), "exact")
            assert prof.betti == expected, f"{K}/{cls}: {prof.betti}"
            assert set(prof.mode_flags) == {"exact"}
            assert dt <= 60
            got.append(prof.betti)
        st["detail"] = str(got)


def test_criterion_5_euler_identity():
    with criterion(5, "Σ(−1)^q b_q(ξ) = χ(X) on the corpus") as st:
        n = failures = 0
        assert len(CORPUS) >= 10 and all(len(v) >= 3 for v in CORPUS.values())
        for name, classes in CORPUS.items():
            chi = cx.euler_characteristic(complex_named(name))
            for rows in classes:
                n += 1
                if novikov_betti(class_from_coeffs(name, rows)).euler_characteristic() != chi:
                    failures += 1
        assert failures == 0, f"{failures} failures"
        st["detail"] = f"{len(CORPUS)} complexes, {n} pairs, 0 failures"


def test_criterion_6_support():
    with criterion(6, "rank-1 support: Δ of circle and torus, trivial bundle flag") as st:
        prof = torsion_annihilators(load("circle.json", "xi_circle.json"))
        assert prof.delta == (t - 1, one), prof.delta
        prof = torsion_annihilators(load("torus.json", "xi_torus_primitive.json"))
        assert prof.delta == (t - 1, t - 1, one), prof.delta
        rank1 = []
        for K, cls in [("circle.json", "xi_circle.json"), ("torus.json", "xi_torus_primitive.json"),
                       ("genus2.json", "xi_primitive.json"), ("genus3.json", "xi_genus3.json"),
                       ("wedge_t2_s1.json", "xi_not_in_ell.json"), ("wedge_t2_s1.json", "xi_in_ell.json"),
                       ("genus2_squared.json", "xi_g2sq_first.json")]:
            spec = load(K, cls)
            assert spec.r == 1
            if spec.complex.num_simplices <= 2000:
                assert torsion_annihilators(spec).contains_trivial_bundle, f"{K}/{cls}"
            # the 4-dimensional product goes through the degree-0 shortcut (Δ_0(1) = 0)
            assert trivial_bundle_in_support(spec), f"{K}/{cls}"
            rank1.append(K)
        st["detail"] = f"trivial bundle in support on {len(rank1)} rank-1 fixtures"


def test_criterion_7_property_suites():
    with criterion(7, "property suites") as st:
        checks = {}
        # ∂̃² = 0, t := 1 and tree independence on the corpus
        pairs = [(n, r) for n, cls in CORPUS.items() for r in cls]
        for name, rows in pairs:
            spec = class_from_coeffs(name, rows)
            K = spec.complex
            tc = twisted_boundary(spec)
            for q in range(2, K.dimension + 1):
                assert (tc.laurent_matrix(q - 1) @ tc.laurent_matrix(q)).is_zero(), f"∂̃² on {name}"
            for q in range(1, K.dimension + 1):
                assert tc.specialize(q) == cx.boundary_matrix(K, q).tolist(), f"t=1 on {name}"
            if K.num_simplices <= 400:
                trees = ["bfs", "dfs", random_tree(K, 11)]
                assert len({novikov_betti(spec, "exact", tree=tr).betti for tr in trees}) == 1, name
                if spec.r == 1:
                    assert len({torsion_annihilators(spec, tr).delta for tr in trees}) == 1, name
            # randomized vs exact (trials = 3) on every matrix with ≤ 300 columns
            for q in range(1, K.dimension + 1):
                if K.count(q) <= EXACT_COLUMN_LIMIT and spec.r:
                    assert twisted_rank(tc, q, "exact")[0] == twisted_rank(tc, q, "randomized", trials=3)[0]
        checks["complex"] = len(pairs)
        assert spanning_tree(complex_named("circle")) == ((0, 1), (0, 2))

        # product inequality on every computed product
        extra = [(class_from_coeffs("circle", [[1]]), class_from_coeffs("circle", [[1]])),
                 (zero_class(complex_named("sphere(2)")), zero_class(complex_named("sphere(2)"))),
                 (class_from_coeffs("wedge(torus,circle)", [[0, 0, 1]]), zero_class(complex_named("circle")))]
        for sx, sy in extra:
            rep = kunneth_compare(sx, sy)
            PRODUCTS.append((f"{sx.complex.name}×{sy.complex.name}", rep.clX, rep.clY, rep.clXY))
        for label, a, b, ab in PRODUCTS:
            assert ab >= a + b, f"{label}: {ab} < {a} + {b}"
        checks["products"] = len(PRODUCTS)

        # cl(X, 0) = classical cup-length and certificates re-verify
        for name in ["circle", "torus", "sphere(2)", "surface(2)", "wedge(torus,circle)"]:
            K = complex_named(name)
            cert, _ = xi_cup_length(zero_class(K))
            assert cert.value == classical_cup_length(K)[0]
            assert verify_certificate(zero_class(K), cert)
        for name, rows in pairs:
            spec = class_from_coeffs(name, rows)
            if spec.complex.num_simplices <= 400:
                cert, cc = xi_cup_length(spec)
                assert verify_certificate(spec, cert, cc), f"certificate {name} {rows}"

        # monotonicity under annotations (every subset of the annotations)
        spec = load("genus2.json", "xi_primitive.json")
        full, _, _ = certified_bounds(spec, load_annotations(FIXTURES / "genus2_manifold.json"))
        bare, _, _ = certified_bounds(spec, Annotations())
        assert full.within(bare)
        spec = load("wedge_t2_s1.json", "xi_in_ell.json")
        full, _, _ = certified_bounds(spec, load_annotations(FIXTURES / "wedge_y_torus.json"))
        bare, _, _ = certified_bounds(spec)
        assert full.within(bare)
        st["detail"] = f"{checks['complex']} (complex, class) pairs, {checks['products']} products"


def test_criterion_8_classical():
    with criterion(8, "integral homology and classical cup-lengths") as st:
        hom = {
            "torus.json": [(1, []), (2, []), (1, [])],
            "genus2.json": [(1, []), (4, []), (1, [])],
            "sphere2.json": [(1, []), (0, []), (1, [])],
            "wedge_t2_s1.json": [(1, []), (3, []), (1, [])],
        }
        for K, expected in hom.items():
            got, dt = timed(integral_homology, cx.load_complex(FIXTURES / K))
            assert [(h["rank"], h["torsion"]) for h in got] == expected, f"{K}: {got}"
            assert dt <= 10
        cls = {"torus.json": 2, "genus2.json": 2, "genus3.json": 2, "sphere2.json": 1}
        for K, expected in cls.items():
            (value, _), dt = timed(classical_cup_length, cx.load_complex(FIXTURES / K))
            assert value == expected, f"{K}: cl {value}"
            assert dt <= 10
        st["detail"] = "homology " + ", ".join(hom) + "; cup-lengths " + str(cls)
