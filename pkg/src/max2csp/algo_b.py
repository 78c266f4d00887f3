"""Component/tree-based solver with bounded splitting depth.

The first phase reduces under a finer preference order (degree >= 6; 5 with
a 3/4-neighbor; 5 all-5; 4 with a 3-neighbor; 4 all-4; 3) and, whenever a
splitting reduction leaves degree-3 neighbors, immediately follows up with
degree-2 contractions on them (degrading to I/0 when a cycle among them has
already dropped a degree).  A backward pass organizes the sequence into a
reduction tree whose nodes mirror component splits; the number of splitting
nodes on a root-to-leaf path (the tree's depth) governs the search exponent:
at most 2 + 19m/100 in general, 1 + 3m/16 at maximum degree 4, and m/6 on
cubic graphs.  Scoring recurses over the tree, summing child components per
color; coloring works top down, re-deriving each splitting vertex's optimal
color by rescoring its children.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .core import InternalError, score_assignment
from .graph import (KIND_0, KIND_I, KIND_II, KIND_III, DegreeBuckets,
                    MutableGraph, Policy, apply_graph_reduction,
                    kind_for_degree)
from .reduce import apply_reduction, extend_coloring, reduce0, reduce3, reverse


@dataclass
class ReductionTree:
    kind: dict                      # vertex -> reduction kind
    children: dict                  # vertex -> list of child vertices
    parent: dict                    # vertex -> parent vertex (roots absent)
    roots: list
    order: list                     # forward steps (v, kind, nbrs, merged)
    depth_below: dict = field(default_factory=dict)

    @property
    def iii_count(self) -> int:
        return sum(1 for k in self.kind.values() if k == KIND_III)


def iii_depth(tree: ReductionTree) -> int:
    """Maximum number of splitting nodes on any root-to-leaf path."""
    return max((tree.depth_below[r] for r in tree.roots), default=0)


def _forward_pass(inst):
    g = MutableGraph.from_instance(inst)
    buckets = DegreeBuckets(g, Policy.B)
    steps = []
    forced = []  # ex-degree-3 neighbors of the last split, ascending ids
    while g.n:
        if forced:
            v = forced.pop(0)
            kind = kind_for_degree(g.degree(v))
            if kind == KIND_III:
                raise InternalError(f"forced follow-up vertex {v} has degree >= 3")
            buckets.discard(v)
        else:
            picked = buckets.pick()
            if picked is None:
                raise InternalError("graph non-empty but no reduction vertex")
            v, kind = picked
            if kind == KIND_III:
                forced = sorted(u for u in g.neighbors(v) if g.degree(u) == 3)
        nbrs, merged = apply_graph_reduction(g, v, kind)
        buckets.touch_around(nbrs)
        steps.append((v, kind, tuple(nbrs), merged))
    return steps


def _backward_pass(steps):
    """Glue subtrees per the reversed reduction order."""
    parent = {}
    children = {v: [] for v, _, _, _ in steps}
    kind = {}
    dsu = {}
    root_of = {}

    def find(v):
        while dsu[v] != v:
            dsu[v] = dsu[dsu[v]]
            v = dsu[v]
        return v

    for v, k, nbrs, _ in reversed(steps):
        kind[v] = k
        dsu[v] = v
        if k == KIND_0:
            root_of[v] = v
            continue
        if k in (KIND_I, KIND_II):
            reps = {find(x) for x in nbrs}
            if len(reps) != 1:
                raise InternalError(
                    f"neighbors of non-splitting vertex {v} span components")
            rep = reps.pop()
            old_root = root_of[rep]
            parent[old_root] = v
            children[v] = [old_root]
            dsu[rep] = v
            root_of[v] = v
            continue
        reps_seen = []
        for x in nbrs:
            rep = find(x)
            if rep not in reps_seen:
                reps_seen.append(rep)
        kid_roots = [root_of[rep] for rep in reps_seen]
        for rep in reps_seen:
            dsu[rep] = v
        for kid in kid_roots:
            parent[kid] = v
        children[v] = kid_roots
        root_of[v] = v
    roots = sorted(v for v, _, _, _ in steps if v not in parent)
    return kind, children, parent, roots


def build_reduction_tree(inst) -> ReductionTree:
    """Forward reduction order plus the backward tree-gluing pass.

    The constructed tree always satisfies the depth bounds (2 + 19m/100 in
    general, 1 + 3m/16 for maximum degree 4, m/6 for cubic inputs); a
    violation raises, since it would signal a selection-order bug.
    """
    steps = _forward_pass(inst)
    kind, children, parent, roots = _backward_pass(steps)
    tree = ReductionTree(kind, children, parent, roots, steps)
    for v, k, _, _ in reversed(steps):
        below = max((tree.depth_below[c] for c in children[v]), default=0)
        tree.depth_below[v] = below + (1 if k == KIND_III else 0)
    d = iii_depth(tree)
    m = inst.m
    max_deg = max((len(list(inst.neighbors(v))) for v in inst.vertices()),
                  default=0)
    bound = 2 + (19 * m) // 100
    if max_deg <= 3:
        bound = m // 6
    elif max_deg <= 4:
        bound = 1 + (3 * m) // 16
    if d > bound:
        raise InternalError(f"splitting depth {d} exceeds bound {bound}")
    return tree


def _check_kind(g, v, kind):
    d = g.degree(v)
    if kind_for_degree(d) != kind:
        raise InternalError(f"tree/instance mismatch at {v}: degree {d}, "
                            f"kind {kind}")


def _score_node(inst, g, tree, v) -> int:
    """Optimal score of v's component, the instance being reduced on all of
    v's ancestors.  Restores the instance before returning."""
    base = inst.niladic
    recs = []
    w = v
    while tree.kind[w] in (KIND_I, KIND_II):
        _check_kind(g, w, tree.kind[w])
        recs.append(apply_reduction(inst, g, w, tree.kind[w]))
        (w,) = tree.children[w]
    if tree.kind[w] == KIND_0:
        _check_kind(g, w, KIND_0)
        recs.append(reduce0(inst, g, w))
        total = inst.niladic - base
    else:
        _check_kind(g, w, KIND_III)
        kids = tree.children[w]
        total = None
        for c in range(inst.r):
            rec = reduce3(inst, g, w, c)
            s = inst.niladic - base
            for kid in kids:
                s += _score_node(inst, g, tree, kid)
            if total is None or s > total:
                total = s
            reverse(inst, g, rec)
    for rec in reversed(recs):
        reverse(inst, g, rec)
    return total


def score_subtree(inst, tree: ReductionTree, v, g=None) -> int:
    """Public entry point for scoring one component of a reduced instance."""
    if g is None:
        g = MutableGraph.from_instance(inst)
    return _score_node(inst, g, tree, v)


def color_tree(inst, tree: ReductionTree) -> dict:
    """Optimal total assignment, derived top down over the reduction tree."""
    g = MutableGraph.from_instance(inst)
    records = []
    phi = {}

    def descend(v):
        w = v
        while True:
            k = tree.kind[w]
            if k in (KIND_I, KIND_II):
                _check_kind(g, w, k)
                records.append(apply_reduction(inst, g, w, k))
                (w,) = tree.children[w]
                continue
            if k == KIND_0:
                _check_kind(g, w, KIND_0)
                records.append(reduce0(inst, g, w))
                return
            break
        base = inst.niladic
        target = _score_node(inst, g, tree, w)
        kids = tree.children[w]
        for c in range(inst.r):
            rec = reduce3(inst, g, w, c)
            s = inst.niladic - base
            for kid in kids:
                s += _score_node(inst, g, tree, kid)
            if s == target:
                records.append(rec)
                phi[w] = c
                for kid in kids:
                    descend(kid)
                return
            reverse(inst, g, rec)
        raise InternalError(f"no color at {w} achieves its component optimum")

    for root in tree.roots:
        descend(root)
    for rec in reversed(records):
        if rec.kind != KIND_III:
            phi[rec.vertex] = extend_coloring(rec, phi)
        reverse(inst, g, rec)
    return phi


def solve_b(inst):
    """Tree-based solve: returns (score, assignment, stats)."""
    t0 = time.perf_counter()
    tree = build_reduction_tree(inst)
    g = MutableGraph.from_instance(inst)
    score = inst.niladic
    for root in tree.roots:
        score += _score_node(inst, g, tree, root)
    phi = color_tree(inst, tree)
    if score_assignment(inst, phi) != score:
        raise InternalError("assignment does not rescore to the optimum")
    stats = {
        "iii_depth": iii_depth(tree),
        "iii_count": tree.iii_count,
        "millis": (time.perf_counter() - t0) * 1000.0,
    }
    return score, phi, stats


# -- weighted MIS hybrid --------------------------------------------------


def solve_mis(g: MutableGraph, weights=None):
    """Maximum-weight independent set.

    Branches two ways on a vertex of degree >= 5 (in or out of the set);
    once the maximum degree is at most 4 the remainder is encoded as a CSP
    and handed to the tree-based solver.  Returns (weight, membership) where
    membership maps each vertex to 1 (chosen) or 0.
    """
    from .core import encode_mis

    weights = dict(weights) if weights else {}
    for v in g.vertices():
        w = weights.setdefault(v, 1)
        if w < 0:
            raise ValueError(f"negative weight {w} at vertex {v}")
    adjacency = {v: set(g.neighbors(v)) for v in g.vertices()}

    def best_set(alive):
        if not alive:
            return 0, set()
        deg = {v: len(adjacency[v] & alive) for v in alive}
        top = max(deg.values())
        if top >= 5:
            v = min(u for u in alive if deg[u] == top)
            w_out, s_out = best_set(alive - {v})
            w_in, s_in = best_set(alive - {v} - adjacency[v])
            w_in += weights[v]
            if w_in > w_out:
                return w_in, s_in | {v}
            return w_out, s_out
        edges = [(u, v) for u in alive for v in adjacency[u] & alive if u < v]
        inst = encode_mis(edges, weights, vertices=alive)
        score, phi, _ = solve_b(inst)
        return score, {u for u in alive if phi[u] == 1}

    weight, chosen = best_set(set(g.vertices()))
    membership = {v: (1 if v in chosen else 0) for v in g.vertices()}
    return weight, membership
