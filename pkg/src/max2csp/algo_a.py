"""Sequence-based branch-and-reduce solver (three phases).

Phase 1 simulates graph reductions under the coarse preference order
(degree 0, 1, 2, then >=5, 4, 3) and records the vertex sequence.  Phase 2
replays the sequence on the scored instance, branching over all colors at
every splitting step, reducing and reversing in place so memory stays
linear.  Phase 3 repeats the search until it hits a leaf achieving the known
optimum and unwinds the reduction stack to read off an optimal coloring.

Also provides the vertex-parametrized variant that splits only on vertices
outside a greedily built induced forest.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import InternalError, score_assignment
from .graph import (KIND_0, KIND_I, KIND_II, KIND_III, DegreeBuckets,
                    MutableGraph, Policy, apply_graph_reduction,
                    kind_for_degree)
from .reduce import apply_reduction, extend_coloring, reduce3, reverse


@dataclass
class ReductionSequence:
    steps: list  # (vertex, kind) in application order

    @property
    def iii_count(self) -> int:
        return sum(1 for _, kind in self.steps if kind == KIND_III)

    def kind_counts(self) -> dict:
        counts = {KIND_0: 0, KIND_I: 0, KIND_II: 0, KIND_III: 0}
        for _, kind in self.steps:
            counts[kind] += 1
        return counts


def phase1_sequence(inst) -> ReductionSequence:
    """Graph-only simulation producing the full reduction sequence."""
    g = MutableGraph.from_instance(inst)
    buckets = DegreeBuckets(g, Policy.A)
    steps = []
    while g.n:
        picked = buckets.pick()
        if picked is None:
            raise InternalError("graph non-empty but no reduction vertex")
        v, kind = picked
        nbrs, _ = apply_graph_reduction(g, v, kind)
        buckets.touch_around(nbrs)
        steps.append((v, kind))
    return ReductionSequence(steps)


def _check_kind(g, v, kind):
    d = g.degree(v)
    if kind_for_degree(d) != kind:
        raise InternalError(
            f"sequence/degree mismatch at {v}: degree {d}, kind {kind}")


def _score_suffix(inst, g, steps, i) -> int:
    """Optimal score of the instance assuming steps[i:] reduce it away."""
    recs = []
    while i < len(steps) and steps[i][1] != KIND_III:
        v, kind = steps[i]
        _check_kind(g, v, kind)
        recs.append(apply_reduction(inst, g, v, kind))
        i += 1
    if i == len(steps):
        best = inst.niladic
    else:
        v = steps[i][0]
        _check_kind(g, v, KIND_III)
        best = None
        for c in range(inst.r):
            rec = reduce3(inst, g, v, c)
            s = _score_suffix(inst, g, steps, i + 1)
            if best is None or s > best:
                best = s
            reverse(inst, g, rec)
    for rec in reversed(recs):
        reverse(inst, g, rec)
    return best


def phase2_score(inst, seq: ReductionSequence) -> int:
    """Optimal score via in-place reduce/branch/reverse along the sequence.

    The instance is restored exactly before returning.
    """
    g = MutableGraph.from_instance(inst)
    return _score_suffix(inst, g, seq.steps, 0)


def _color_suffix(inst, g, steps, i, target, phi) -> bool:
    recs = []
    while i < len(steps) and steps[i][1] != KIND_III:
        v, kind = steps[i]
        recs.append(apply_reduction(inst, g, v, kind))
        i += 1
    hit = False
    if i == len(steps):
        hit = inst.niladic == target
    else:
        v = steps[i][0]
        for c in range(inst.r):
            rec = reduce3(inst, g, v, c)
            if _color_suffix(inst, g, steps, i + 1, target, phi):
                phi[v] = c
                reverse(inst, g, rec)
                hit = True
                break
            reverse(inst, g, rec)
    for rec in reversed(recs):
        if hit:
            # later-reduced vertices are already colored, so the saved
            # tables determine this vertex's best color
            phi[rec.vertex] = extend_coloring(rec, phi)
        reverse(inst, g, rec)
    return hit


def phase3_coloring(inst, seq: ReductionSequence, target: int) -> dict:
    """Re-run the search until a leaf scores ``target``; unwind to a coloring."""
    g = MutableGraph.from_instance(inst)
    phi = {}
    if not _color_suffix(inst, g, seq.steps, 0, target, phi):
        raise InternalError(f"no leaf achieves the target score {target}")
    return phi


def solve_a(inst):
    """Full three-phase solve: returns (score, assignment, stats)."""
    t0 = time.perf_counter()
    seq = phase1_sequence(inst)
    score = phase2_score(inst, seq)
    phi = phase3_coloring(inst, seq, score)
    if score_assignment(inst, phi) != score:
        raise InternalError("assignment does not rescore to the optimum")
    stats = {
        "iii_count": seq.iii_count,
        "reductions": seq.kind_counts(),
        "millis": (time.perf_counter() - t0) * 1000.0,
    }
    return score, phi, stats


# -- induced-forest variant ----------------------------------------------


def _two_core(adj: dict) -> set:
    """Vertices of the maximal subgraph with minimum degree >= 2."""
    deg = {v: len(nbrs) for v, nbrs in adj.items()}
    stack = [v for v, d in deg.items() if d <= 1]
    dead = set(stack)
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in dead:
                deg[u] -= 1
                if deg[u] <= 1:
                    dead.add(u)
                    stack.append(u)
    return set(adj) - dead


def find_induced_forest(g: MutableGraph) -> set:
    """Inclusion-maximal vertex set inducing a forest.

    Greedy rule: repeatedly delete a maximum-degree vertex that lies on a
    cycle (smallest id on ties) until acyclic, then add back any deleted
    vertex whose reinsertion keeps the induced subgraph acyclic.
    """
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    deleted = []
    while True:
        core = _two_core(adj)
        if not core:
            break
        top = max(len(adj[v]) for v in core)
        v = min(u for u in core if len(adj[u]) == top)
        for u in adj[v]:
            adj[u].discard(v)
        del adj[v]
        deleted.append(v)

    forest = set(adj)
    parent = {v: v for v in g.vertices()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for v in forest:
        for u in adj[v]:
            if u < v:
                parent[find(u)] = find(v)
    for v in sorted(deleted):
        nbrs = [u for u in g.neighbors(v) if u in forest]
        roots = [find(u) for u in nbrs]
        if len(set(roots)) == len(roots):
            forest.add(v)
            for root in roots:
                parent[root] = find(v)
    return forest


def forest_sequence(inst, forest=None):
    """Reduction sequence that splits only on vertices outside ``forest``.

    Vertices outside the forest are reduced first, highest current degree
    first (degrading to 0/I/II when the degree has dropped below 3); the
    remainder is finished under the standard preference order.
    Returns (sequence, forest).
    """
    g = MutableGraph.from_instance(inst)
    if forest is None:
        forest = find_induced_forest(g)
    outside = set(g.vertices()) - set(forest)
    steps = []
    while outside:
        top = max(g.degree(v) for v in outside)
        v = min(u for u in outside if g.degree(u) == top)
        kind = kind_for_degree(g.degree(v))
        apply_graph_reduction(g, v, kind)
        outside.discard(v)
        steps.append((v, kind))
    buckets = DegreeBuckets(g, Policy.A)
    while g.n:
        v, kind = buckets.pick()
        nbrs, _ = apply_graph_reduction(g, v, kind)
        buckets.touch_around(nbrs)
        steps.append((v, kind))
    return ReductionSequence(steps), forest


def solve_via_induced_forest(inst):
    """Solve by splitting only outside a maximal induced forest."""
    t0 = time.perf_counter()
    seq, forest = forest_sequence(inst)
    score = phase2_score(inst, seq)
    phi = phase3_coloring(inst, seq, score)
    if score_assignment(inst, phi) != score:
        raise InternalError("assignment does not rescore to the optimum")
    stats = {
        "iii_count": seq.iii_count,
        "forest_size": len(forest),
        "reductions": seq.kind_counts(),
        "millis": (time.perf_counter() - t0) * 1000.0,
    }
    return score, phi, stats
