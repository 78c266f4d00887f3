"""Deterministic instance generators for benchmarks and tests."""

from __future__ import annotations

import itertools
import random

from .core import Instance, encode_max_cut

KINDS = ("gnm", "cubic", "union-k5")


def gnm_edges(n: int, m: int, seed: int) -> list:
    """Uniform random simple graph with exactly n vertices and m edges."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    if m > len(pairs):
        raise ValueError(f"m={m} exceeds {len(pairs)} possible edges")
    rng = random.Random(seed)
    return sorted(rng.sample(pairs, m))


def cubic_edges(n: int, seed: int) -> list:
    """Random 3-regular simple graph via the pairing model with rejection."""
    if n < 4 or n % 2:
        raise ValueError(f"cubic graphs need even n >= 4, got {n}")
    rng = random.Random(seed)
    while True:
        points = [v for v in range(1, n + 1) for _ in range(3)]
        rng.shuffle(points)
        edges = set()
        ok = True
        for i in range(0, len(points), 2):
            u, v = points[i], points[i + 1]
            key = (min(u, v), max(u, v))
            if u == v or key in edges:
                ok = False
                break
            edges.add(key)
        if ok:
            return sorted(edges)


def union_k5_edges(k: int) -> list:
    """k disjoint complete graphs on 5 vertices."""
    if k < 1:
        raise ValueError("need k >= 1")
    edges = []
    for block in range(k):
        base = 5 * block
        edges.extend((base + u, base + v)
                     for u in range(1, 6) for v in range(u + 1, 6))
    return edges


def generate_graph(kind: str, n=0, m=0, k=0, seed=0) -> tuple:
    """Returns (vertices, edges) for one of the generator kinds."""
    if kind == "gnm":
        return list(range(1, n + 1)), gnm_edges(n, m, seed)
    if kind == "cubic":
        return list(range(1, n + 1)), cubic_edges(n, seed)
    if kind == "union-k5":
        return list(range(1, 5 * k + 1)), union_k5_edges(k)
    raise ValueError(f"unknown generator kind '{kind}' (choose from {KINDS})")


def random_instance(n: int, m: int, r: int, seed: int, score_range=5) -> Instance:
    """Random instance on a gnm graph with uniform integer tables."""
    rng = random.Random(seed)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    m = min(m, len(pairs))
    edges = sorted(rng.sample(pairs, m))
    lo, hi = -score_range, score_range
    inst = Instance(r, rng.randint(lo, hi))
    for v in range(1, n + 1):
        inst.add_vertex(v, [rng.randint(lo, hi) for _ in range(r)])
    for u, v in edges:
        inst.add_edge(u, v, [[rng.randint(lo, hi) for _ in range(r)]
                             for _ in range(r)])
    return inst


def generate_instance(kind: str, n=0, m=0, k=0, seed=0, scores="maxcut",
                      score_range=5) -> Instance:
    """Instance over a generated graph; score tables are unit Max Cut by
    default, or uniform random integers with ``scores='random'``."""
    vertices, edges = generate_graph(kind, n=n, m=m, k=k, seed=seed)
    if scores == "maxcut":
        return encode_max_cut(edges, vertices=vertices)
    if scores != "random":
        raise ValueError(f"unknown score mode '{scores}'")
    rng = random.Random(seed + 0x5CE5)
    lo, hi = -score_range, score_range
    inst = Instance(2, rng.randint(lo, hi))
    for v in vertices:
        inst.add_vertex(v, [rng.randint(lo, hi) for _ in range(2)])
    for u, v in edges:
        inst.add_edge(u, v, [[rng.randint(lo, hi) for _ in range(2)]
                             for _ in range(2)])
    return inst
