"""Score-preserving CSP reductions and their exact reversal.

All four reductions operate in place on an (Instance, MutableGraph) pair and
return a record holding exact copies of everything they destroyed, so that
``reverse`` restores both structures bit for bit.  Kinds: 0 removes an
isolated vertex, I folds a pendant vertex into its neighbor's monadic table,
II contracts a degree-2 vertex into a (possibly merged) edge between its
neighbors, and III fixes a color on a vertex of degree >= 3 and pushes the
incident dyadic scores into the neighbors' monadic tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import KIND_0, KIND_I, KIND_II, KIND_III


@dataclass
class ReductionRecord:
    kind: int
    vertex: int
    monadic: list                       # saved s_y
    neighbors: tuple = ()               # neighbor ids at application time
    edge_tables: dict = field(default_factory=dict)  # neighbor -> canonical table
    old_monadics: dict = field(default_factory=dict)  # neighbor -> saved table
    color: int = -1                     # III only
    niladic_delta: int = 0              # 0 and III only
    merged: bool = False                # II only
    prior_edge_table: list = None       # II only, pre-merge table for (x,z)


def _oriented(inst, u, v, cu, cv):
    return inst.edge_score(u, v, cu, cv)


def _pop_edge(inst, g, u, v):
    """Remove edge (u,v) from both structures, returning its canonical table."""
    key = (u, v) if u < v else (v, u)
    table = inst.dyadic.pop(key)
    del g.adj[u][v]
    del g.adj[v][u]
    return table


def _push_edge(inst, g, u, v, canonical_table):
    key = (u, v) if u < v else (v, u)
    inst.dyadic[key] = canonical_table
    g.add_edge(u, v)


def reduce0(inst, g, y) -> ReductionRecord:
    """Delete the isolated vertex y, banking max_C s_y(C) in the niladic."""
    if g.degree(y) != 0:
        raise ValueError(f"0-reduction needs degree 0, vertex {y} has {g.degree(y)}")
    table = inst.monadic.pop(y)
    g.remove_vertex(y)
    delta = max(table)
    inst.niladic += delta
    return ReductionRecord(KIND_0, y, table, niladic_delta=delta)


def reduce1(inst, g, y) -> ReductionRecord:
    """Fold pendant y into neighbor x: s'_x(C) = s_x(C) + max_D (s_xy(CD) + s_y(D))."""
    if g.degree(y) != 1:
        raise ValueError(f"I-reduction needs degree 1, vertex {y} has {g.degree(y)}")
    (x,) = g.neighbors(y)
    r = inst.r
    sy = inst.monadic.pop(y)
    exy = _pop_edge(inst, g, x, y)
    g.remove_vertex(y)
    old_sx = inst.monadic[x]
    lookup = (lambda c, d: exy[c][d]) if x < y else (lambda c, d: exy[d][c])
    inst.monadic[x] = [
        old_sx[c] + max(lookup(c, d) + sy[d] for d in range(r)) for c in range(r)
    ]
    return ReductionRecord(KIND_I, y, sy, (x,), {x: exy}, {x: old_sx})


def reduce2(inst, g, y) -> ReductionRecord:
    """Contract degree-2 vertex y into an edge between its neighbors x, z.

    The new table is s'_xz(C,D) = [s_xz(C,D)] + max_F (s_xy(CF)+s_yz(FD)+s_y(F));
    the bracketed term is the elementwise merge with a pre-existing xz edge.
    """
    if g.degree(y) != 2:
        raise ValueError(f"II-reduction needs degree 2, vertex {y} has {g.degree(y)}")
    nbrs = g.neighbors(y)
    if len(nbrs) != 2:
        raise ValueError(f"II-reduction needs two distinct neighbors at {y}")
    x, z = nbrs
    r = inst.r
    sy = inst.monadic.pop(y)
    exy = _pop_edge(inst, g, x, y)
    eyz = _pop_edge(inst, g, y, z)
    g.remove_vertex(y)
    look_xy = (lambda c, f: exy[c][f]) if x < y else (lambda c, f: exy[f][c])
    look_yz = (lambda f, d: eyz[f][d]) if y < z else (lambda f, d: eyz[d][f])
    combined = [
        [max(look_xy(c, f) + look_yz(f, d) + sy[f] for f in range(r))
         for d in range(r)]
        for c in range(r)
    ]  # combined[c][d]: c colors x, d colors z; x < z already
    merged = inst.has_edge(x, z)
    prior = None
    if merged:
        prior = inst.dyadic[(x, z)]
        inst.dyadic[(x, z)] = [
            [prior[c][d] + combined[c][d] for d in range(r)] for c in range(r)
        ]
    else:
        _push_edge(inst, g, x, z, combined)
    return ReductionRecord(KIND_II, y, sy, (x, z), {x: exy, z: eyz},
                           merged=merged, prior_edge_table=prior)


def reduce3(inst, g, y, color: int) -> ReductionRecord:
    """Fix color C on y (degree >= 3): bank s_y(C) and push each incident
    dyadic score s_xy(*, C) into the neighbor's monadic table."""
    if g.degree(y) < 3:
        raise ValueError(f"III-reduction needs degree >= 3, vertex {y} has {g.degree(y)}")
    if not 0 <= color < inst.r:
        raise ValueError(f"color {color} out of range")
    r = inst.r
    nbrs = tuple(g.neighbors(y))
    sy = inst.monadic.pop(y)
    edge_tables = {}
    old_monadics = {}
    for x in nbrs:
        ex = _pop_edge(inst, g, x, y)
        edge_tables[x] = ex
        old = inst.monadic[x]
        old_monadics[x] = old
        lookup = (lambda c: ex[c][color]) if x < y else (lambda c: ex[color][c])
        inst.monadic[x] = [old[c] + lookup(c) for c in range(r)]
    g.remove_vertex(y)
    inst.niladic += sy[color]
    return ReductionRecord(KIND_III, y, sy, nbrs, edge_tables, old_monadics,
                           color=color, niladic_delta=sy[color])


def reverse(inst, g, rec: ReductionRecord) -> None:
    """Undo a reduction; records must be reversed in LIFO order."""
    y = rec.vertex
    if y in inst.monadic:
        raise ValueError(f"stale record: vertex {y} is already present")
    if rec.kind == KIND_0:
        inst.niladic -= rec.niladic_delta
        inst.monadic[y] = rec.monadic
        g.add_vertex(y)
        return
    if rec.kind == KIND_I:
        (x,) = rec.neighbors
        inst.monadic[x] = rec.old_monadics[x]
        inst.monadic[y] = rec.monadic
        g.add_vertex(y)
        _push_edge(inst, g, x, y, rec.edge_tables[x])
        return
    if rec.kind == KIND_II:
        x, z = rec.neighbors
        if rec.merged:
            inst.dyadic[(x, z)] = rec.prior_edge_table
        else:
            _pop_edge(inst, g, x, z)
        inst.monadic[y] = rec.monadic
        g.add_vertex(y)
        _push_edge(inst, g, x, y, rec.edge_tables[x])
        _push_edge(inst, g, y, z, rec.edge_tables[z])
        return
    # III
    inst.niladic -= rec.niladic_delta
    inst.monadic[y] = rec.monadic
    g.add_vertex(y)
    for x in rec.neighbors:
        inst.monadic[x] = rec.old_monadics[x]
        _push_edge(inst, g, x, y, rec.edge_tables[x])


def apply_reduction(inst, g, v, kind, color=-1) -> ReductionRecord:
    if kind == KIND_0:
        return reduce0(inst, g, v)
    if kind == KIND_I:
        return reduce1(inst, g, v)
    if kind == KIND_II:
        return reduce2(inst, g, v)
    return reduce3(inst, g, v, color)


def extend_coloring(rec: ReductionRecord, phi) -> int:
    """Optimal color for rec.vertex given colors of its reduced-time
    neighbors.  Ties break toward the smallest color; kind III is rejected
    because its color was chosen during the search."""
    y = rec.vertex
    r = len(rec.monadic)
    if rec.kind == KIND_III:
        raise ValueError("III colors are fixed by the search, not extension")
    if rec.kind == KIND_0:
        return max(range(r), key=lambda c: (rec.monadic[c], -c))
    if rec.kind == KIND_I:
        (x,) = rec.neighbors
        exy = rec.edge_tables[x]
        cx = phi[x]
        look = (lambda f: exy[cx][f]) if x < y else (lambda f: exy[f][cx])
        return max(range(r), key=lambda f: (look(f) + rec.monadic[f], -f))
    x, z = rec.neighbors
    exy, eyz = rec.edge_tables[x], rec.edge_tables[z]
    cx, cz = phi[x], phi[z]
    look_xy = (lambda f: exy[cx][f]) if x < y else (lambda f: exy[f][cx])
    look_yz = (lambda f: eyz[f][cz]) if y < z else (lambda f: eyz[cz][f])
    return max(range(r),
               key=lambda f: (look_xy(f) + look_yz(f) + rec.monadic[f], -f))
