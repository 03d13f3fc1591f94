"""Regenerate the CLI fixture files (and, with --surfaces, the shipped surface
triangulations).

Surfaces of genus 2 and 3 are built as connected sums of the 9-vertex torus and
then shrunk by random edge contractions that respect the link condition, keeping
the smallest triangulation found.
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from zcat import complex as cx
from zcat.cover import ClassSpec, normalize_class, product_class, zero_class
from zcat.cup import integral_basis


def contract_once(tris: set, rng: random.Random) -> set | None:
    edges = sorted({e for t in tris for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))})
    rng.shuffle(edges)
    nbrs: dict[int, set[int]] = {}
    for t in tris:
        for v in t:
            nbrs.setdefault(v, set()).update(w for w in t if w != v)
    for u, v in edges:
        opposite = {w for t in tris if u in t and v in t for w in t if w not in (u, v)}
        if nbrs[u] & nbrs[v] != opposite:
            continue
        new = set()
        for t in tris:
            if u in t and v in t:
                continue
            new.add(tuple(sorted(u if w == v else w for w in t)))
        if len({w for t in new for w in t}) < 4:
            continue
        return new
    return None


def relabel(tris: set) -> list:
    verts = sorted({v for t in tris for v in t})
    m = {v: i for i, v in enumerate(verts)}
    return sorted(tuple(sorted(m[v] for v in t)) for t in tris)


def grid_torus(n: int) -> cx.SimplicialComplex:
    cycle = cx.from_maximal([(i, (i + 1) % n) for i in range(n)], f"C{n}")
    return cx.product(cycle, cycle)


def small_surface(g: int, attempts: int, seed: int) -> cx.SimplicialComplex:
    base = grid_torus(5)
    for _ in range(g - 1):
        base = cx.connected_sum(base, grid_torus(5))
    rng = random.Random(seed)
    best = None
    for _ in range(attempts):
        tris = set(base.simplices[2])
        while (nxt := contract_once(tris, rng)) is not None:
            tris = nxt
        tops = relabel(tris)
        if best is None or len(tops) < len(best):
            best = tops
    return cx.from_maximal(best, f"genus{g}")


def basis_cocycle(K: cx.SimplicialComplex, k: int) -> tuple[int, ...]:
    v = integral_basis(K, 1).representatives[k]
    return tuple(v.get(e, 0) for e in range(K.count(1)))


def class_json(spec: ClassSpec) -> dict:
    return spec.to_json()


def write(path: Path, data) -> None:
    text = data if isinstance(data, str) else json.dumps(data, indent=1)
    path.write_text(text.rstrip("\n") + "\n")
    print(f"wrote {path}")


def fixtures(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    circle, torus, sphere2 = cx.circle(), cx.torus(), cx.sphere(2)
    g2, g3 = cx.surface(2), cx.surface(3)
    for name, K in [("circle", circle), ("torus", torus), ("sphere2", sphere2), ("genus2", g2), ("genus3", g3)]:
        write(out / f"{name}.json", cx.serialize_complex(K))
    write(out / "xi_circle.json", {"cocycles": [{"[0,1]": 1}]})
    write(out / "xi_zero.json", {"cocycles": []})
    a, b = basis_cocycle(torus, 0), basis_cocycle(torus, 1)
    write(out / "xi_torus_primitive.json", class_json(normalize_class(torus, [a])))
    write(out / "xi_rank2.json", class_json(normalize_class(torus, [a, b])))
    xi2 = normalize_class(g2, [basis_cocycle(g2, 0)])
    write(out / "xi_primitive.json", class_json(xi2))
    write(out / "xi_genus3.json", class_json(normalize_class(g3, [basis_cocycle(g3, 0)])))
    manifold2 = {"manifold": {"closed": True, "connected": True, "smooth": True, "dim": 2}}
    write(out / "genus2_manifold.json", manifold2)

    # T² ∨ S¹: the circle is the triangle on vertices 0, 9, 10
    W = cx.wedge(torus, circle)
    write(out / "wedge_t2_s1.json", cx.serialize_complex(W))
    n = W.count(1)
    # torus vertices keep their labels in the wedge
    alpha = [0] * n
    for e, (u, v) in enumerate(torus.simplices[1]):
        alpha[W.index[1][(u, v)]] = a[e]
    gamma = [0] * n
    gamma[W.index[1][(0, 9)]] = 1
    gamma = tuple(gamma)
    mixed = tuple(x + y for x, y in zip(alpha, gamma))
    regimes = {
        "not_in_ell": normalize_class(W, [mixed]),
        "in_ell": normalize_class(W, [gamma]),
        "zero": zero_class(W),
    }
    write(out / "xi_not_in_ell.json", class_json(regimes["not_in_ell"]))
    write(out / "xi_in_ell.json", class_json(regimes["in_ell"]))
    write(out / "wedge_family.json", {"classes": [{"id": k, **class_json(v)} for k, v in regimes.items()]})
    write(out / "wedge_y_torus.json", {"wedge_with_circle": {"Y": "torus.json"}})

    # (T² ∨ S¹)²: nine kernel patterns
    WW = cx.product(W, W)
    write(out / "wedge_squared.json", cx.serialize_complex(WW))
    pattern_ab = {"not_in_ell": (0, 0), "in_ell": (1, 0), "zero": (0, 1)}
    rows = []
    for n1, s1 in regimes.items():
        for n2, s2 in regimes.items():
            spec = product_class(WW, s1, s2)
            a_cnt = pattern_ab[n1][0] + pattern_ab[n2][0]
            b_cnt = pattern_ab[n1][1] + pattern_ab[n2][1]
            rows.append({"id": f"{n1}x{n2}", "a": a_cnt, "b": b_cnt, **class_json(spec)})
    write(out / "wedge_squared_family.json", {"classes": rows})

    # Σ₂ × Σ₂ with the three class patterns and product annotations
    P = cx.product(g2, g2)
    write(out / "genus2_squared.json", cx.serialize_complex(P))
    manifold4 = {"closed": True, "connected": True, "smooth": True, "dim": 4}
    z2 = zero_class(g2)
    for tag, (s1, s2) in {"both": (xi2, xi2), "first": (xi2, z2), "zero": (z2, z2)}.items():
        spec = product_class(P, s1, s2)
        write(out / f"xi_g2sq_{tag}.json", class_json(spec))
        factors = []
        for s, cls in ((s1, "xi_primitive.json"), (s2, "xi_primitive.json")):
            item = {"complex": "genus2.json", "annotations": "genus2_manifold.json"}
            if s.r:
                item["class"] = cls
            factors.append(item)
        write(out / f"ann_g2sq_{tag}.json", {"manifold": manifold4, "product_factors": factors})


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--surfaces", action="store_true", help="also rebuild the genus-2/3 data files")
    ap.add_argument("--attempts", type=int, default=600)
    ap.add_argument("--seed", type=int, default=4)
    ap.add_argument("--root", type=Path, default=Path(__file__).resolve().parents[1])
    args = ap.parse_args()
    if args.surfaces:
        data = args.root / "src" / "zcat" / "data"
        for g in (2, 3):
            K = small_surface(g, args.attempts, args.seed)
            print(f"genus {g}: f-vector {K.f_vector}, chi {cx.euler_characteristic(K)}")
            write(data / f"genus{g}.json", {"name": f"genus{g}", "simplices": [list(s) for s in K.maximal]})
    fixtures(args.root / "fixtures")


if __name__ == "__main__":
    main()
