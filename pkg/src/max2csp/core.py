"""Max (r,2)-CSP instances with exact integer scores.

An instance consists of a niladic constant, one monadic score table per
vertex (length r) and one dyadic score table per edge (r x r).  Colors are
0-based internally.  Dyadic tables are stored row-major for the pair
(min(u,v), max(u,v)): ``table[color_of_smaller][color_of_larger]``.

All arithmetic is on plain Python integers, so it is exact and can never
overflow or wrap.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

Assignment = dict  # vertex id -> color in 0..r-1

DEFAULT_ORACLE_BUDGET = 10 ** 7
ORACLE_BUDGET_ENV = "MAX2CSP_ORACLE_BUDGET"


class BudgetError(Exception):
    """Raised when an enumeration or table would exceed its size guard."""


class InternalError(Exception):
    """An internal invariant was violated (solver bug, not bad input)."""


def edge_key(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"loop edge at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass
class Instance:
    """A mutable Max (r,2)-CSP instance over integer vertex ids."""

    r: int
    niladic: int = 0
    monadic: dict = field(default_factory=dict)   # v -> list[int] of length r
    dyadic: dict = field(default_factory=dict)    # (u,v) u<v -> r x r rows

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"domain size must be >= 2, got {self.r}")

    # -- structure -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.monadic)

    @property
    def m(self) -> int:
        return len(self.dyadic)

    def vertices(self):
        return self.monadic.keys()

    def edges(self):
        return self.dyadic.keys()

    def has_vertex(self, v: int) -> bool:
        return v in self.monadic

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.dyadic

    def add_vertex(self, v: int, table=None) -> None:
        if v in self.monadic:
            raise ValueError(f"vertex {v} already present")
        self.monadic[v] = list(table) if table is not None else [0] * self.r

    def add_edge(self, u: int, v: int, table) -> None:
        """Insert the dyadic table for edge (u, v), given in (u, v) order."""
        key = edge_key(u, v)
        if key in self.dyadic:
            raise ValueError(f"duplicate edge {key}")
        if u not in self.monadic or v not in self.monadic:
            raise ValueError(f"edge {u},{v} has a missing endpoint")
        rows = [list(row) for row in table]
        if key != (u, v):
            rows = [[rows[d][c] for d in range(self.r)] for c in range(self.r)]
        self.dyadic[key] = rows

    def edge_score(self, u: int, v: int, cu: int, cv: int) -> int:
        """Dyadic score of edge (u,v) with u colored cu and v colored cv."""
        key = edge_key(u, v)
        table = self.dyadic[key]
        return table[cu][cv] if key == (u, v) else table[cv][cu]

    def neighbors(self, v: int):
        for (a, b) in self.dyadic:
            if a == v:
                yield b
            elif b == v:
                yield a

    def copy(self) -> "Instance":
        return Instance(
            self.r,
            self.niladic,
            {v: list(t) for v, t in self.monadic.items()},
            {e: [list(row) for row in t] for e, t in self.dyadic.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.r == other.r and self.niladic == other.niladic
                and self.monadic == other.monadic and self.dyadic == other.dyadic)


def score_assignment(inst: Instance, phi: Assignment) -> int:
    """Exact score of a total assignment: niladic + monadic + dyadic sums."""
    total = inst.niladic
    for v, table in inst.monadic.items():
        if v not in phi:
            raise ValueError(f"assignment misses vertex {v}")
        total += table[phi[v]]
    for (u, v), table in inst.dyadic.items():
        total += table[phi[u]][phi[v]]
    return total


def oracle_budget(budget=None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(ORACLE_BUDGET_ENV)
    return int(env) if env else DEFAULT_ORACLE_BUDGET


def brute_force_solve(inst: Instance, budget=None):
    """Enumerate all r^n assignments; return (best score, first maximizer).

    Maximizers are compared in lexicographic order over vertices sorted by
    id, so the result is deterministic.  Guarded by ``budget`` (default
    10^7 assignments, overridable via MAX2CSP_ORACLE_BUDGET).
    """
    limit = oracle_budget(budget)
    verts = sorted(inst.monadic)
    if inst.r ** len(verts) > limit:
        raise BudgetError(
            f"{inst.r}^{len(verts)} assignments exceed oracle budget {limit}")
    best_score = None
    best = None
    for colors in itertools.product(range(inst.r), repeat=len(verts)):
        phi = dict(zip(verts, colors))
        s = score_assignment(inst, phi)
        if best_score is None or s > best_score:
            best_score, best = s, phi
    if best is None:  # n = 0
        return inst.niladic, {}
    return best_score, best


# -- encoders ----------------------------------------------------------


def _vertex_set(edges, vertices=None):
    verts = set(vertices) if vertices is not None else set()
    for u, v in edges:
        verts.add(u)
        verts.add(v)
    return verts


def encode_max_cut(edges, weights=None, vertices=None) -> Instance:
    """Max Cut as a (2,2)-CSP: an edge scores its weight when endpoints differ.

    ``weights`` maps edges (either orientation) to integers; default 1.
    Rejects loops and duplicate edges; merge weights before encoding.
    """
    inst = Instance(2)
    for v in sorted(_vertex_set(edges, vertices)):
        inst.add_vertex(v)
    for u, v in edges:
        w = 1
        if weights is not None:
            w = weights.get((u, v), weights.get((v, u), 1))
        inst.add_edge(u, v, [[0, w], [w, 0]])
    return inst


def encode_max_dicut(arcs, vertices=None) -> Instance:
    """Max Dicut: arc (u,v) scores 1 when u gets color 0 and v color 1.

    Antiparallel arcs accumulate in the one table kept for the pair.
    """
    inst = Instance(2)
    for v in sorted(_vertex_set(arcs, vertices)):
        inst.add_vertex(v)
    for u, v in arcs:
        key = edge_key(u, v)
        if key not in inst.dyadic:
            inst.add_edge(key[0], key[1], [[0, 0], [0, 0]])
        table = inst.dyadic[key]
        if (u, v) == key:
            table[0][1] += 1
        else:
            table[1][0] += 1
    return inst


def encode_max_2sat(clauses, num_vars=None) -> Instance:
    """Weighted Max 2-Sat.  ``clauses`` is a list of (literals, weight).

    Literals are nonzero ints in DIMACS style; color 1 means true.  A unit
    clause feeds the variable's monadic table; a clause on two distinct
    variables adds its weight to the three satisfying entries of the dyadic
    table; (x or not x) adds to the niladic constant and (x or x) collapses
    to a unit clause.
    """
    inst = Instance(2)
    variables = set(range(1, num_vars + 1)) if num_vars else set()
    for lits, _ in clauses:
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            variables.add(abs(lit))
    for v in sorted(variables):
        inst.add_vertex(v)
    for lits, w in clauses:
        if w <= 0:
            raise ValueError(f"clause weight must be positive, got {w}")
        if len(lits) == 0:
            raise ValueError("empty clause")
        if len(lits) > 2:
            raise ValueError(f"clause arity {len(lits)} > 2")
        if len(lits) == 2 and abs(lits[0]) == abs(lits[1]):
            a, b = lits
            if a == b:
                lits = (a,)                      # (x or x) == (x)
            else:
                inst.niladic += w                # (x or not x) is always true
                continue
        if len(lits) == 1:
            lit = lits[0]
            inst.monadic[abs(lit)][1 if lit > 0 else 0] += w
            continue
        a, b = lits
        u, v = abs(a), abs(b)
        key = edge_key(u, v)
        if key not in inst.dyadic:
            inst.add_edge(key[0], key[1], [[0, 0], [0, 0]])
        table = inst.dyadic[key]
        lit_u, lit_v = (a, b) if abs(a) == key[0] else (b, a)
        for cu in (0, 1):
            for cv in (0, 1):
                sat_u = (cu == 1) == (lit_u > 0)
                sat_v = (cv == 1) == (lit_v > 0)
                if sat_u or sat_v:
                    table[cu][cv] += w
    return inst


def encode_mis(edges, weights=None, vertices=None) -> Instance:
    """Weighted MIS: color 1 means 'in the set'; an edge with both endpoints
    chosen is penalized by -(w(u)+w(v)+1), steep enough that no optimum ever
    uses it, for any nonnegative integer weights."""
    inst = Instance(2)
    verts = sorted(_vertex_set(edges, vertices))
    weights = weights or {}
    for v in verts:
        w = weights.get(v, 1)
        if w < 0:
            raise ValueError(f"negative weight {w} at vertex {v}")
        inst.add_vertex(v, [0, w])
    seen = set()
    for u, v in edges:
        key = edge_key(u, v)
        if key in seen:
            continue
        seen.add(key)
        penalty = -(weights.get(u, 1) + weights.get(v, 1) + 1)
        table = [[0, 0], [0, penalty]]
        inst.add_edge(key[0], key[1], table)
    return inst


def validate_instance(inst: Instance) -> list:
    """Check all structural invariants; return a list of violation strings."""
    report = []
    if inst.r < 2:
        report.append(f"domain size {inst.r} < 2")
    if not isinstance(inst.niladic, int):
        report.append("niladic score is not an integer")
    for v, table in inst.monadic.items():
        if len(table) != inst.r:
            report.append(f"monadic table of {v} has length {len(table)} != r")
        elif not all(isinstance(x, int) for x in table):
            report.append(f"monadic table of {v} has non-integer entries")
    for (u, v), table in inst.dyadic.items():
        if u >= v:
            report.append(f"edge key ({u},{v}) is not ordered")
        if u == v:
            report.append(f"loop edge at {u}")
        for w in (u, v):
            if w not in inst.monadic:
                report.append(f"edge ({u},{v}) endpoint {w} is not a vertex")
        if len(table) != inst.r or any(len(row) != inst.r for row in table):
            report.append(f"dyadic table of ({u},{v}) is not {inst.r}x{inst.r}")
        elif not all(isinstance(x, int) for row in table for x in row):
            report.append(f"dyadic table of ({u},{v}) has non-integer entries")
    return report
