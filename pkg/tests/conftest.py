from __future__ import annotations

import functools
import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from zcat import complex as cx
from zcat.cover import normalize_class, zero_class
from zcat.cup import integral_basis

settings.register_profile(
    "repo", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@functools.lru_cache(maxsize=None)
def complex_named(name: str) -> cx.SimplicialComplex:
    return cx.parse_build_expr(name)


@functools.lru_cache(maxsize=None)
def h1_basis(name: str) -> tuple[tuple[int, ...], ...]:
    K = complex_named(name)
    reps = integral_basis(K, 1).representatives
    return tuple(tuple(v.get(e, 0) for e in range(K.count(1))) for v in reps)


def combo(K, vecs, coeffs):
    n = K.count(1)
    return tuple(sum(c * v[e] for c, v in zip(coeffs, vecs)) for e in range(n))


def coboundary_noise(K, seed: int, scale: int = 3) -> tuple[int, ...]:
    rng = random.Random(seed)
    pot = {v: rng.randint(-scale, scale) for v in K.vertices}
    return tuple(pot[v] - pot[u] for u, v in K.simplices[1])


def class_from_coeffs(name: str, rows, noise_seed: int | None = None):
    """ξ on a named complex from integer coefficient rows over the H¹ basis."""
    K = complex_named(name)
    basis = h1_basis(name)
    raw = []
    for row in rows:
        c = combo(K, basis, row)
        if noise_seed is not None:
            c = tuple(x + y for x, y in zip(c, coboundary_noise(K, noise_seed)))
        raw.append(c)
    return normalize_class(K, raw) if raw else zero_class(K)


def primitive(name: str, k: int = 0):
    n = len(h1_basis(name))
    return class_from_coeffs(name, [[int(i == k) for i in range(n)]])


def random_tree(K, seed: int):
    """Random spanning tree (Kruskal over shuffled edges)."""
    rng = random.Random(seed)
    edges = list(K.simplices[1])
    rng.shuffle(edges)
    parent = {v: v for v in K.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            tree.append((u, v))
    return tuple(tree)


# complexes small enough for exact computations everywhere
SMALL = ["circle", "torus", "sphere(2)", "surface(2)", "surface(3)", "wedge(torus,circle)"]


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
