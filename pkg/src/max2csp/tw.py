"""Tree decompositions from reduction trees, validation, DP solving, PACE io.

The decomposition replays a reduction tree bottom up: an isolated-vertex
node becomes a singleton bag; a pendant node adds a bag {y, x}; a degree-2
contraction either splits the unique bag {x, z} of a width-1 child (the pure
subdivision case) or adds a bag {x, y, z}; a splitting node is added to
every bag of every child component and joined through a fresh singleton bag.
The resulting width is at most the tree's splitting depth plus two.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .core import BudgetError, InternalError
from .graph import KIND_0, KIND_I, KIND_II, KIND_III

DP_TABLE_BUDGET = 10 ** 7


@dataclass
class TreeDecomposition:
    bags: list                  # list of vertex sets
    tree_edges: list            # (i, j) bag-index pairs
    n_vertices: int = 0

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def canonical(self) -> "TreeDecomposition":
        edges = sorted((min(a, b), max(a, b)) for a, b in self.tree_edges)
        return TreeDecomposition([set(b) for b in self.bags], edges,
                                 self.n_vertices)

    def __eq__(self, other):
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.bags == b.bags and a.tree_edges == b.tree_edges
                and a.n_vertices == b.n_vertices)


def _find_bag(bags, wanted: set) -> int:
    for i, bag in enumerate(bags):
        if wanted <= bag:
            return i
    raise InternalError(f"no bag contains {sorted(wanted)}")


def decomposition_from_reduction_tree(inst, tree) -> TreeDecomposition:
    """Replay the reduction tree bottom up into a valid decomposition."""
    dec = {}  # tree node -> (bags, edges) of its subtree, locally indexed
    for v, kind, nbrs, merged in reversed(tree.order):
        if kind == KIND_0:
            dec[v] = ([{v}], [])
            continue
        if kind == KIND_I:
            (child,) = tree.children[v]
            bags, edges = dec.pop(child)
            (x,) = nbrs
            i = _find_bag(bags, {x})
            bags.append({v, x})
            edges.append((len(bags) - 1, i))
            dec[v] = (bags, edges)
            continue
        if kind == KIND_II:
            (child,) = tree.children[v]
            bags, edges = dec.pop(child)
            x, z = nbrs
            small = all(len(b) <= 2 for b in bags)
            copies = [i for i, b in enumerate(bags) if b == {x, z}]
            if not merged and small and len(copies) == 1:
                # pure subdivision of a width-1 child: split {x,z} into
                # {x,v}-{v,z} and reattach neighbors by shared endpoint
                i = copies[0]
                bags[i] = {x, v}
                bags.append({v, z})
                j = len(bags) - 1
                for t, (a, b) in enumerate(edges):
                    other = b if a == i else (a if b == i else None)
                    if other is not None and z in bags[other] and x not in bags[other]:
                        edges[t] = (j, other)
                edges.append((i, j))
            else:
                i = _find_bag(bags, {x, z})
                bags.append({x, v, z})
                edges.append((len(bags) - 1, i))
            dec[v] = (bags, edges)
            continue
        # splitting node: absorb v into every child bag, join via {v}
        bags = []
        edges = []
        anchor_bags = []
        for child in tree.children[v]:
            cbags, cedges = dec.pop(child)
            off = len(bags)
            bags.extend({v} | b for b in cbags)
            edges.extend((a + off, b + off) for a, b in cedges)
            anchor_bags.append(off)
        bags.append({v})
        join = len(bags) - 1
        edges.extend((join, a) for a in anchor_bags)
        dec[v] = (bags, edges)

    bags = []
    edges = []
    anchors = []
    for root in tree.roots:
        rbags, redges = dec.pop(root)
        off = len(bags)
        bags.extend(rbags)
        edges.extend((a + off, b + off) for a, b in redges)
        anchors.append(off)
    # bridge the per-component trees into one tree
    edges.extend((anchors[i], anchors[i + 1]) for i in range(len(anchors) - 1))
    return TreeDecomposition(bags, edges, n_vertices=inst.n)


def validate_decomposition(inst, td: TreeDecomposition) -> list:
    """Check the three decomposition properties plus tree shape; returns a
    list of violation strings (empty means valid)."""
    report = []
    q = len(td.bags)
    verts = set(inst.vertices())
    for i, bag in enumerate(td.bags):
        stray = bag - verts
        if stray:
            report.append(f"bag {i} contains non-vertices {sorted(stray)}")
    covered = set().union(*td.bags) if td.bags else set()
    missing = verts - covered
    if missing:
        report.append(f"vertices not covered: {sorted(missing)}")
    for (u, v) in inst.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            report.append(f"edge ({u},{v}) lies in no bag")
    adj = {i: [] for i in range(q)}
    for a, b in td.tree_edges:
        if not (0 <= a < q and 0 <= b < q) or a == b:
            report.append(f"bad tree edge ({a},{b})")
            continue
        adj[a].append(b)
        adj[b].append(a)
    if q:
        if len(td.tree_edges) != q - 1:
            report.append(f"{len(td.tree_edges)} tree edges for {q} bags")
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != q:
            report.append("bag tree is disconnected")
    for v in sorted(verts):
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        if not holding:
            continue
        seen = {holding[0]}
        stack = [holding[0]]
        members = set(holding)
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if j in members and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if seen != members:
            report.append(f"bags containing {v} are not connected")
    return report


# -- dynamic programming over a nice decomposition -------------------------


def _nice_ops(td: TreeDecomposition):
    """Post-order introduce/forget/join program equivalent to the tree."""
    q = len(td.bags)
    if q == 0:
        return []
    adj = {i: [] for i in range(q)}
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    ops = []

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * q + 100))

    def chain_to(bag_from: set, bag_to: set):
        cur = set(bag_from)
        for v in sorted(bag_from - bag_to):
            ops.append(("forget", v))
            cur.discard(v)
        for v in sorted(bag_to - bag_from):
            cur.add(v)
            ops.append(("intro", v, tuple(sorted(cur))))

    def build(i: int, parent: int):
        kids = [j for j in adj[i] if j != parent]
        if not kids:
            ops.append(("leaf",))
            chain_to(set(), td.bags[i])
            return
        for t, j in enumerate(kids):
            build(j, i)
            chain_to(td.bags[j], td.bags[i])
            if t:
                ops.append(("join",))

    build(0, -1)
    chain_to(td.bags[0], set())
    return ops


def dp_solve(inst, td: TreeDecomposition, budget=None) -> int:
    """Optimum by table passing over the nice form of the decomposition.

    Introduce nodes add the new vertex's monadic score plus dyadic scores of
    in-bag edges; forget nodes maximize over the departing color; join nodes
    add both child tables and subtract the shared bag's double-counted
    scores.  Guarded by r^(width+1) against oversized tables.
    """
    limit = budget if budget is not None else DP_TABLE_BUDGET
    r = inst.r
    if td.bags and r ** (td.width + 1) > limit:
        raise BudgetError(
            f"{r}^{td.width + 1} DP table entries exceed budget {limit}")
    for (u, v) in inst.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            raise ValueError(f"decomposition misses edge ({u},{v})")
    missing = set(inst.vertices()) - (set().union(*td.bags) if td.bags else set())
    if missing:
        raise ValueError(f"decomposition misses vertices {sorted(missing)}")

    ops = _nice_ops(td)
    final, _ = _dp_forward(inst, ops)
    if final is None:
        return inst.niladic
    return inst.niladic + final[1][()]


def dp_solve_assignment(inst, td: TreeDecomposition, budget=None):
    """Like dp_solve but also backtracks an optimal total assignment."""
    score = dp_solve(inst, td, budget=budget)
    ops = _nice_ops(td)
    final, forget_inputs = _dp_forward(inst, ops, keep_forget_inputs=True)
    phi = {}
    if final is None:
        return score, phi
    r = inst.r
    demands = [()]
    for idx in range(len(ops) - 1, -1, -1):
        op = ops[idx]
        if op[0] == "leaf":
            demands.pop()
        elif op[0] == "intro":
            v = op[1]
            key = demands.pop()
            pos = _insert_pos(op[2], v)
            phi[v] = key[pos]
            demands.append(key[:pos] + key[pos + 1:])
        elif op[0] == "forget":
            v = op[1]
            key = demands.pop()
            cbag, ctable = forget_inputs[idx]
            pos = cbag.index(v)
            want = max(ctable[key[:pos] + (c,) + key[pos:]] for c in range(r))
            for c in range(r):
                if ctable[key[:pos] + (c,) + key[pos:]] == want:
                    demands.append(key[:pos] + (c,) + key[pos:])
                    break
        else:  # join
            key = demands.pop()
            demands.append(key)
            demands.append(key)
    if demands:
        raise InternalError("assignment backtrack left residue")
    return score, phi


def _insert_pos(bag: tuple, v) -> int:
    return bag.index(v)


def _dp_forward(inst, ops, keep_forget_inputs=False):
    r = inst.r

    def bag_scores(bag: tuple, colors: tuple) -> int:
        at = dict(zip(bag, colors))
        total = sum(inst.monadic[v][at[v]] for v in bag)
        for i, u in enumerate(bag):
            for v in bag[i + 1:]:
                if inst.has_edge(u, v):
                    total += inst.edge_score(u, v, at[u], at[v])
        return total

    stack = []  # (sorted bag tuple, {coloring tuple: best score})
    forget_inputs = {}
    for idx, op in enumerate(ops):
        if op[0] == "leaf":
            stack.append(((), {(): 0}))
        elif op[0] == "intro":
            v = op[1]
            bag, table = stack.pop()
            pos = op[2].index(v)
            nbag = op[2]
            ntable = {}
            inbag_edges = [(u, i) for i, u in enumerate(bag) if inst.has_edge(u, v)]
            for key, val in table.items():
                for c in range(r):
                    add = inst.monadic[v][c]
                    for u, i in inbag_edges:
                        add += inst.edge_score(u, v, key[i], c)
                    ntable[key[:pos] + (c,) + key[pos:]] = val + add
            stack.append((nbag, ntable))
        elif op[0] == "forget":
            v = op[1]
            bag, table = stack.pop()
            if keep_forget_inputs:
                forget_inputs[idx] = (bag, table)
            pos = bag.index(v)
            nbag = bag[:pos] + bag[pos + 1:]
            ntable = {}
            for key, val in table.items():
                nkey = key[:pos] + key[pos + 1:]
                if nkey not in ntable or val > ntable[nkey]:
                    ntable[nkey] = val
            stack.append((nbag, ntable))
        else:  # join
            bag_r, table_r = stack.pop()
            bag_l, table_l = stack.pop()
            if bag_l != bag_r:
                raise InternalError("join bags differ")
            ntable = {key: table_l[key] + table_r[key] - bag_scores(bag_l, key)
                      for key in table_l}
            stack.append((bag_l, ntable))
    if not stack:
        return None, forget_inputs
    final = stack.pop()
    if stack or final[0] != ():
        raise InternalError("nice-decomposition evaluation left residue")
    return final, forget_inputs


# -- PACE 2017 .td text format ---------------------------------------------


def export_pace(td: TreeDecomposition) -> str:
    """Canonical PACE text: header, bags ascending, sorted tree edges."""
    td = td.canonical()
    q = len(td.bags)
    width_plus_1 = td.width + 1 if q else 0
    lines = [f"s td {q} {width_plus_1} {td.n_vertices}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append(" ".join(["b", str(i)] + [str(v) for v in sorted(bag)]))
    for a, b in td.tree_edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def parse_pace(text: str) -> TreeDecomposition:
    bags = {}
    edges = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise ValueError(f"line {lineno}: duplicate header")
            if len(parts) != 5 or parts[1] != "td":
                raise ValueError(f"line {lineno}: malformed header")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "b":
            idx = int(parts[1])
            if idx in bags:
                raise ValueError(f"line {lineno}: duplicate bag {idx}")
            bags[idx] = set(int(v) for v in parts[2:])
        else:
            a, b = int(parts[0]), int(parts[1])
            edges.append((a - 1, b - 1))
    if header is None:
        raise ValueError("missing 's td' header")
    q, _, n = header
    if set(bags) != set(range(1, q + 1)):
        raise ValueError(f"expected bags 1..{q}, got {sorted(bags)}")
    bag_list = [bags[i] for i in range(1, q + 1)]
    return TreeDecomposition(bag_list, edges, n_vertices=n).canonical()
