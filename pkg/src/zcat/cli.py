"""Command line interface: ``zcat <subcommand> <complex-file> [<class-file>] [options]``.

Reports are JSON (stdout or --out) with a text rendering behind --text.
Exit codes: 0 ok, 2 input error, 3 unsupported, 4 annotation conflict.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import AnnotationConflict, Annotations, certified_bounds, load_annotations
from .complex import (
    ComplexError,
    SimplicialComplex,
    euler_characteristic,
    load_complex,
    parse_build_expr,
)
from .cover import ClassSpec, load_class, parse_class_data, spanning_tree, zero_class
from .cup import BudgetExceeded, integral_homology, xi_cup_length
from .linalg import DEFAULT_SEED
from .novikov import choose_mode, novikov_betti
from .support import UnsupportedRank, torsion_annihilators

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_CONFLICT = 0, 2, 3, 4


class InputError(ValueError):
    pass


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _read_complex(path: str) -> tuple[SimplicialComplex, dict]:
    p = Path(path)
    if not p.exists():
        raise InputError(f"complex file not found: {path}")
    return load_complex(p), {"path": path, "sha256": _digest(p)}


def _read_class(K: SimplicialComplex, path: str | None) -> tuple[ClassSpec, dict | None]:
    if path is None:
        return zero_class(K), None
    p = Path(path)
    if not p.exists():
        raise InputError(f"class file not found: {path}")
    return load_class(K, p), {"path": path, "sha256": _digest(p)}


def _check_budget(K: SimplicialComplex, budget: int | None) -> None:
    if budget is not None and K.num_simplices > budget:
        raise InputError(f"complex has {K.num_simplices} simplices, budget is {budget}")


def _mode_section(args, K: SimplicialComplex) -> dict:
    return {"requested": args.mode, "effective": choose_mode(K, args.mode), "seed": args.seed, "trials": args.trials}


# --- subcommands -------------------------------------------------------------------


def cmd_build(args) -> dict:
    p = Path(args.complex)
    if p.exists():
        K = load_complex(p)
        inputs = {"complex": {"path": args.complex, "sha256": _digest(p)}}
    else:
        K = parse_build_expr(args.complex)
        inputs = {"expression": args.complex}
    _check_budget(K, args.budget)
    return {
        "inputs": inputs,
        "complex": K.to_json(),
        "f_vector": list(K.f_vector),
        "euler_characteristic": euler_characteristic(K),
    }


def cmd_homology(args) -> dict:
    K, d = _read_complex(args.complex)
    _check_budget(K, args.budget)
    return {
        "inputs": {"complex": d},
        "f_vector": list(K.f_vector),
        "euler_characteristic": euler_characteristic(K),
        "connected": K.is_connected,
        "homology": integral_homology(K),
    }


def cmd_class_info(args) -> dict:
    K, d = _read_complex(args.complex)
    spec, dc = _read_class(K, args.class_file)
    tree = spanning_tree(K)
    return {
        "inputs": {"complex": d, "class": dc},
        "r": spec.r,
        "kernel": spec.kernel_note,
        "normalized": spec.to_json(),
        "tree": [list(e) for e in tree],
    }


def cmd_novikov(args) -> dict:
    K, d = _read_complex(args.complex)
    _check_budget(K, args.budget)
    spec, dc = _read_class(K, args.class_file)
    prof = novikov_betti(spec, args.mode, args.seed, args.trials)
    return {"inputs": {"complex": d, "class": dc}, "settings": _mode_section(args, K), "r": spec.r, **prof.to_json()}


def cmd_cup_length(args) -> dict:
    K, d = _read_complex(args.complex)
    _check_budget(K, args.budget)
    spec, dc = _read_class(K, args.class_file)
    cert, cc = xi_cup_length(spec, args.mode, args.seed, args.trials)
    return {
        "inputs": {"complex": d, "class": dc},
        "settings": _mode_section(args, K),
        "r": spec.r,
        "novikov_betti": cc.betti_numbers(),
        "cup_length": cert.to_json(K, cc.backend),
        "note": (
            "single twisted factor w0 over Q(H) times untwisted integral classes; "
            "products with several nontrivial bundles are not searched"
        ),
    }


def cmd_support(args) -> dict:
    K, d = _read_complex(args.complex)
    _check_budget(K, args.budget)
    spec, dc = _read_class(K, args.class_file)
    prof = torsion_annihilators(spec)
    return {"inputs": {"complex": d, "class": dc}, "r": spec.r, **prof.to_json()}


def _annotations(args) -> tuple[Annotations, dict | None]:
    if not args.annotations:
        return Annotations(), None
    p = Path(args.annotations)
    if not p.exists():
        raise InputError(f"annotations file not found: {args.annotations}")
    return load_annotations(p), {"path": args.annotations, "sha256": _digest(p)}


def cmd_cat_bounds(args) -> dict:
    K, d = _read_complex(args.complex)
    _check_budget(K, args.budget)
    spec, dc = _read_class(K, args.class_file)
    ann, da = _annotations(args)
    bounds, cert, factors = certified_bounds(spec, ann, args.mode, args.seed, args.trials)
    out = {
        "inputs": {"complex": d, "class": dc, "annotations": da},
        "settings": _mode_section(args, K),
        "r": spec.r,
        "cl": cert.value,
        "cl_mode": cert.mode,
        **bounds.to_json(),
    }
    if factors:
        out["factors"] = [{"label": f.label, "cl": f.cl, "lo": f.bounds.lo, "hi": f.bounds.hi} for f in factors]
    return out


def sweep(K: SimplicialComplex, family: dict, ann: Annotations | None = None, mode="auto", seed=DEFAULT_SEED, trials=2) -> dict:
    """One row per class of the family (input order), plus groups by (cl, lo, hi)."""
    rows = []
    for i, item in enumerate(family.get("classes", [])):
        cid = str(item.get("id", i))
        try:
            spec = parse_class_data(K, item)
            bounds, cert, _ = certified_bounds(spec, ann, mode, seed, trials)
            rows.append({"id": cid, "r": spec.r, "cl": cert.value, "lo": bounds.lo, "hi": bounds.hi, "mode": cert.mode})
        except (ComplexError, ValueError, BudgetExceeded) as exc:
            rows.append({"id": cid, "error": f"{type(exc).__name__}: {exc}"})
    groups: dict[tuple, list[str]] = {}
    for row in rows:
        if "error" not in row:
            groups.setdefault((row["cl"], row["lo"], row["hi"]), []).append(row["id"])
    return {
        "rows": rows,
        "groups": [{"cl": k[0], "lo": k[1], "hi": k[2], "ids": v} for k, v in groups.items()],
    }


def cmd_sweep(args) -> dict:
    K, d = _read_complex(args.complex)
    _check_budget(K, args.budget)
    if args.class_file is None:
        raise InputError("sweep needs a class-family file")
    p = Path(args.class_file)
    if not p.exists():
        raise InputError(f"family file not found: {args.class_file}")
    try:
        family = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"family file is not valid JSON: {exc}") from None
    ann, da = _annotations(args)
    table = sweep(K, family, ann, args.mode, args.seed, args.trials)
    return {
        "inputs": {"complex": d, "family": {"path": args.class_file, "sha256": _digest(p)}, "annotations": da},
        "settings": _mode_section(args, K),
        **table,
    }


COMMANDS = {
    "build": cmd_build,
    "homology": cmd_homology,
    "class-info": cmd_class_info,
    "novikov": cmd_novikov,
    "cup-length": cmd_cup_length,
    "support": cmd_support,
    "cat-bounds": cmd_cat_bounds,
    "sweep": cmd_sweep,
}


# --- rendering ---------------------------------------------------------------------


def render_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(render_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(f"{pad}  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(x for x in lines if x)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zcat", description="Cohomological bounds for cat(X, ξ) of simplicial complexes")
    ap.add_argument("--version", action="version", version=f"zcat {__version__}")
    ap.add_argument("subcommand", choices=sorted(COMMANDS))
    ap.add_argument("complex", help="complex file (build also accepts an expression such as 'product(torus,circle)')")
    ap.add_argument("class_file", nargs="?", default=None, help="class file (sweep: class-family file)")
    ap.add_argument("--annotations", default=None)
    ap.add_argument("--mode", choices=["auto", "exact", "randomized"], default="auto")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--trials", type=int, default=2)
    ap.add_argument("--out", default=None)
    ap.add_argument("--text", action="store_true")
    ap.add_argument("--budget", type=int, default=None, help="maximum number of simplices")
    return ap


def _fail(kind: str, message: str, code: int, extra: dict | None = None) -> int:
    payload = {"error": {"kind": kind, "message": message, "exit_code": code, **(extra or {})}}
    print(json.dumps(payload, ensure_ascii=False), file=sys.stderr)
    return code


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        body = COMMANDS[args.subcommand](args)
    except UnsupportedRank as exc:
        return _fail("unsupported", str(exc), EXIT_UNSUPPORTED)
    except AnnotationConflict as exc:
        return _fail("annotation_conflict", str(exc), EXIT_CONFLICT, {"rules": exc.rules})
    except (InputError, ComplexError, BudgetExceeded, ValueError, KeyError, OSError) as exc:
        return _fail("input", f"{type(exc).__name__}: {exc}", EXIT_INPUT)
    report = {"tool": "zcat", "version": __version__, "command": args.subcommand, **body}
    text = render_text(report) if args.text else json.dumps(report, indent=2, ensure_ascii=False)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
