"""Mutable constraint-graph structure and reduction-vertex selection.

The graph supports parallel edges (multiplicity counts) so that degree-2
contractions can be modelled faithfully, but the solver pipeline coalesces
eagerly and keeps its graphs simple at all times.

Vertex selection uses one stack per degree class.  Stacks are insertion
ordered and popped LIFO, which makes every run deterministic.  Policy A uses
the coarse classes 0, 1, 2, >=5, 4, 3 (in that preference order).  Policy B
refines degrees 4 and 5 by the neighbor degrees: >=6 first, then 5 with a
3- or 4-neighbor, 5 with all 5-neighbors, 4 with a 3-neighbor, 4 with all
4-neighbors, then 3.
"""

from __future__ import annotations

from enum import Enum

from .core import InternalError

KIND_0, KIND_I, KIND_II, KIND_III = 0, 1, 2, 3


def kind_for_degree(d: int) -> int:
    return KIND_III if d >= 3 else d


class Policy(Enum):
    A = "a"
    B = "b"


class MutableGraph:
    """Multigraph over integer vertex ids with multiplicity-counted edges."""

    def __init__(self):
        self.adj = {}  # v -> {u: multiplicity}

    @classmethod
    def from_instance(cls, inst) -> "MutableGraph":
        g = cls()
        for v in inst.vertices():
            g.add_vertex(v)
        for (u, v) in inst.edges():
            g.add_edge(u, v)
        return g

    @classmethod
    def from_edges(cls, edges, vertices=None) -> "MutableGraph":
        g = cls()
        for v in vertices or ():
            g.add_vertex(v)
        for u, v in edges:
            for w in (u, v):
                if w not in g.adj:
                    g.add_vertex(w)
            g.add_edge(u, v)
        return g

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(sum(mult.values()) for mult in self.adj.values()) // 2

    def vertices(self):
        return self.adj.keys()

    def add_vertex(self, v: int) -> None:
        if v in self.adj:
            raise ValueError(f"vertex {v} already present")
        self.adj[v] = {}

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"loop edge at {u}")
        self.adj[u][v] = self.adj[u].get(v, 0) + 1
        self.adj[v][u] = self.adj[v].get(u, 0) + 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, ())

    def remove_vertex(self, v: int) -> None:
        for u in self.adj[v]:
            del self.adj[u][v]
        del self.adj[v]

    def degree(self, v: int) -> int:
        return sum(self.adj[v].values())

    def neighbors(self, v: int):
        """Distinct neighbors of v, ascending."""
        return sorted(self.adj[v])

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.adj), default=0)

    def is_simple(self) -> bool:
        return all(m == 1 for mult in self.adj.values() for m in mult.values())

    def copy(self) -> "MutableGraph":
        g = MutableGraph()
        g.adj = {v: dict(mult) for v, mult in self.adj.items()}
        return g

    def __eq__(self, other):
        if not isinstance(other, MutableGraph):
            return NotImplemented
        return self.adj == other.adj


def coalesce_parallel(g: MutableGraph, v: int, on_merge=None) -> int:
    """Merge parallel edges at v down to multiplicity 1.

    ``on_merge(v, u, count)`` is invoked once per neighbor that had
    ``count`` >= 2 parallel edges, so callers can sum score tables.
    Returns the number of edge merges performed.
    """
    merges = 0
    for u in sorted(g.adj[v]):
        count = g.adj[v][u]
        if count > 1:
            if on_merge is not None:
                on_merge(v, u, count)
            g.adj[v][u] = 1
            g.adj[u][v] = 1
            merges += count - 1
    return merges


def components(g: MutableGraph) -> list:
    """Connected components as sorted vertex lists, ordered by smallest id."""
    seen = set()
    out = []
    for start in sorted(g.adj):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            for u in g.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        out.append(sorted(comp))
    return out


# -- degree-class stacks ------------------------------------------------

# Policy A classes, in preference order.
A_ORDER = ("d0", "d1", "d2", "d5plus", "d4", "d3")

# Policy B classes.  The *_high classes hold vertices of degree 4 or 5 that
# have a neighbor of larger degree; they are never popped because some
# higher-preference class is then necessarily non-empty.
B_ORDER = ("d0", "d1", "d2", "d6plus", "d5_34", "d5_all5", "d4_3", "d4_all4",
           "d3", "d5_high", "d4_high")


def classify(g: MutableGraph, v: int, policy: Policy) -> str:
    d = g.degree(v)
    if d <= 2:
        return f"d{d}"
    if policy is Policy.A:
        if d >= 5:
            return "d5plus"
        return f"d{d}"
    if d >= 6:
        return "d6plus"
    if d == 3:
        return "d3"
    nbr_degrees = [g.degree(u) for u in g.adj[v]]
    if d == 5:
        if any(nd in (3, 4) for nd in nbr_degrees):
            return "d5_34"
        if all(nd == 5 for nd in nbr_degrees):
            return "d5_all5"
        return "d5_high"
    if any(nd == 3 for nd in nbr_degrees):
        return "d4_3"
    if all(nd == 4 for nd in nbr_degrees):
        return "d4_all4"
    return "d4_high"


class DegreeBuckets:
    """LIFO stacks of vertices keyed by degree class for one policy."""

    def __init__(self, g: MutableGraph, policy: Policy):
        self.g = g
        self.policy = policy
        self.order = A_ORDER if policy is Policy.A else B_ORDER
        self.stacks = {key: {} for key in self.order}  # dict used as ordered set
        self.key_of = {}
        for v in sorted(g.adj):
            key = classify(g, v, policy)
            self.stacks[key][v] = None
            self.key_of[v] = key

    def touch(self, v: int) -> None:
        """Reclassify v after a degree or neighborhood change."""
        if v not in self.g.adj:
            if v in self.key_of:
                del self.stacks[self.key_of.pop(v)][v]
            return
        key = classify(self.g, v, self.policy)
        old = self.key_of.get(v)
        if key != old:
            if old is not None:
                del self.stacks[old][v]
            self.stacks[key][v] = None
            self.key_of[v] = key

    def touch_around(self, vertices) -> None:
        """Reclassify the given vertices and (under policy B) their neighbors,
        whose fine classes depend on these degrees."""
        affected = set(vertices)
        if self.policy is Policy.B:
            for v in vertices:
                if v in self.g.adj:
                    affected.update(self.g.adj[v])
        for v in sorted(affected):
            self.touch(v)

    def discard(self, v: int) -> None:
        if v in self.key_of:
            del self.stacks[self.key_of.pop(v)][v]

    def pick(self):
        """Pop the next reduction vertex; returns (vertex, kind) or None."""
        for key in self.order:
            stack = self.stacks[key]
            if stack:
                if key in ("d5_high", "d4_high"):
                    raise InternalError(
                        f"selection fell through to {key}; a higher-preference "
                        "class must be non-empty whenever it is populated")
                v, _ = stack.popitem()
                del self.key_of[v]
                return v, kind_for_degree(self.g.degree(v))
        return None

    def rescan_check(self) -> None:
        """Verify cached classes against a full recomputation (test hook)."""
        for v in self.g.adj:
            want = classify(self.g, v, self.policy)
            have = self.key_of.get(v)
            if want != have:
                raise InternalError(f"stale bucket for {v}: {have} != {want}")
        live = set(self.g.adj)
        cached = set(self.key_of)
        if live != cached:
            raise InternalError(f"bucket membership mismatch: {live ^ cached}")


def apply_graph_reduction(g: MutableGraph, v: int, kind: int):
    """Perform the graph-only effect of a reduction on v.

    Returns (neighbors at reduction time, merged) where ``merged`` says
    whether a degree-2 contraction coalesced its new edge with an existing
    one.  The graph is kept simple.
    """
    nbrs = g.neighbors(v)
    d = g.degree(v)
    if kind_for_degree(d) != kind:
        raise InternalError(f"vertex {v} has degree {d}, not a kind-{kind} site")
    merged = False
    g.remove_vertex(v)
    if kind == KIND_II:
        x, z = nbrs
        if g.has_edge(x, z):
            merged = True
        else:
            g.add_edge(x, z)
    return nbrs, merged
