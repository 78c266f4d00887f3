"""Reduction-effect tables, an exact rational simplex, and dual certificates.

Each table row records what one reduction (or half-reduction) destroys:
edges, then vertices of degree 4, 3, 2, 1, an optional "forces" coupling,
and the depth the reduction contributes.  The depth bound for a family of
reductions is the optimum of

    maximize  depth . x
    s.t.      e . x = 1,   d4 . x >= 0, ..., d1 . x >= 0,
              forces . x >= 0 (where present),   x >= 0,

solved here with Bland's rule over ``fractions.Fraction`` so every optimum
and certificate is exact.  Dual weights are reported for the constraints in
their written orientation: the edge weight is free and certifies the bound;
all inequality weights must be <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import InternalError

F = Fraction
HALF = F(1, 2)


@dataclass(frozen=True)
class Row:
    label: str
    destroys: tuple        # (e, d4, d3, d2, d1)
    forces: Fraction
    depth: Fraction

    def column(self, i: int) -> Fraction:
        return self.destroys[i] if i < 5 else self.forces


@dataclass
class EffectTable:
    name: str
    rows: list
    has_forces: bool

    @property
    def num_constraints(self) -> int:
        return 6 if self.has_forces else 5

    def replace(self, label: str, row: Row) -> "EffectTable":
        if not any(r.label == label for r in self.rows):
            raise ValueError(f"no row labelled {label} in {self.name}")
        rows = [row if r.label == label else r for r in self.rows]
        return EffectTable(self.name, rows, self.has_forces)


def _r(label, e, d4, d3, d2, d1, forces, depth) -> Row:
    return Row(label, (F(e), F(d4), F(d3), F(d2), F(d1)), F(forces), F(depth))


_TABLE_A = [
    #     label        e    d4  d3  d2  d1  forces depth
    _r("(4|4000)",     4,    5, -4,  0,  0,  0, 1),
    _r("(4|3100)",     4,    4, -2, -1,  0,  0, 1),
    _r("(4|2200)",     4,    3,  0, -2,  0,  0, 1),
    _r("(4|1300)",     4,    2,  2, -3,  0,  0, 1),
    _r("(4|0400)",     4,    1,  4, -4,  0,  0, 1),
    _r("(3|0300)",     3,    0,  4, -3,  0,  0, 1),
    _r("II",           1,    0,  0,  1,  0,  0, 0),
    _r("halfedge@4",   HALF, 1, -1,  0,  0,  0, 0),
    _r("halfedge@3",   HALF, 0,  1, -1,  0,  0, 0),
    _r("halfedge@2",   HALF, 0,  0,  1, -1,  0, 0),
    _r("halfedge@1",   HALF, 0,  0,  0,  1,  0, 0),
]

# Splitting reductions are labelled (d|n5 n4 n3): the degree of the reduced
# vertex and its neighbor counts by degree.  Edge/vertex effects include the
# mandatory follow-up contractions on ex-degree-3 neighbors.  The two "bad"
# reductions appear three ways each: depth 0 (first occurrence on a path),
# paired with the reduction that preceded it (depth 2), or coupled through
# the forces column to the contractions that excuse it.
_TABLE_B = [
    _r("(5|005)",     10,    0,  5,  0,  0,  0, 1),
    _r("(5|014)",      9,    1,  3,  0,  0,  0, 1),
    _r("(5|023)",      8,    2,  1,  0,  0,  0, 1),
    _r("(5|032)",      7,    3, -1,  0,  0,  0, 1),
    _r("(5|041)",      6,    4, -3,  0,  0,  0, 1),
    _r("(5|050)",      5,    5, -5,  0,  0,  0, 1),
    _r("(5|104)",      9,   -1,  4,  0,  0,  0, 1),
    _r("(5|113)",      8,    0,  2,  0,  0,  0, 1),
    _r("(5|122)",      7,    1,  0,  0,  0,  0, 1),
    _r("(5|131)",      6,    2, -2,  0,  0,  0, 1),
    _r("(5|140)",      5,    3, -4,  0,  0,  0, 1),
    _r("(5|203)",      8,   -2,  3,  0,  0,  0, 1),
    _r("(5|212)",      7,   -1,  1,  0,  0,  0, 1),
    _r("(5|221)",      6,    0, -1,  0,  0,  0, 1),
    _r("(5|230)",      5,    1, -3,  0,  0,  0, 1),
    _r("(5|302)",      7,   -3,  2,  0,  0,  0, 1),
    _r("(5|311)",      6,   -2,  0,  0,  0,  0, 1),
    _r("(5|320)",      5,   -1, -2,  0,  0,  0, 1),
    _r("(5|401)",      6,   -4,  1,  0,  0,  0, 1),
    _r("(5|410)",      5,   -3, -1,  0,  0,  0, 1),
    _r("(5|500)-first", 5,  -5,  0,  0,  0,  0, 0),
    _r("5+5",         15,   -5,  5,  0,  0,  0, 2),
    _r("(5|500)-forced", 5, -5,  0,  0,  0, -1, 1),
    _r("(4|004)",      8,    1,  4,  0,  0,  0, 1),
    _r("(4|013)",      7,    2,  2,  0,  0,  0, 1),
    _r("(4|022)",      6,    3,  0,  0,  0,  0, 1),
    _r("(4|031)",      5,    4, -2,  0,  0,  0, 1),
    _r("(4|040)-first", 4,   5, -4,  0,  0,  0, 0),
    _r("4+4",         12,    6,  0,  0,  0,  0, 2),
    _r("(4|040)-forced", 4,  5, -4,  0,  0, -1, 1),
    _r("(3|003)",      6,    0,  4,  0,  0,  0, 1),
    _r("II",           1,    0,  0,  1,  0,  1, 0),
    _r("halfedge@5",  HALF, -1,  0,  0,  0,  HALF, 0),
    _r("halfedge@4",  HALF,  1, -1,  0,  0,  HALF, 0),
    _r("halfedge@3",  HALF,  0,  1, -1,  0,  HALF, 0),
    _r("halfedge@2",  HALF,  0,  0,  1, -1,  HALF, 0),
    _r("halfedge@1",  HALF,  0,  0,  0,  1,  HALF, 0),
]


def table_a() -> EffectTable:
    """Effects of the coarse-preference reductions (11 rows, no forces)."""
    return EffectTable("tableA", list(_TABLE_A), has_forces=False)


def table_b() -> EffectTable:
    """Effects of the fine-preference reductions with pairing (37 rows)."""
    return EffectTable("tableB", list(_TABLE_B), has_forces=True)


def table_b4() -> EffectTable:
    """The fine table restricted to maximum degree 4: every row that touches
    a degree-5 vertex is dropped; the bold degree-4 family stays."""
    rows = [r for r in _TABLE_B
            if not r.label.startswith("(5") and r.label != "5+5"
            and r.label != "halfedge@5"]
    return EffectTable("tableB4", rows, has_forces=True)


def cubic_oracle_row(alpha) -> Row:
    """Stand-in row for handing a 3-regular remainder to an external routine
    that charges alpha depth per edge: destroys 1 edge and 2/3 of a
    degree-3 vertex."""
    alpha = F(alpha)
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return Row("cubic-oracle", (F(1), F(0), F(2, 3), F(0), F(0)), F(0), alpha)


def lp_alpha_table(alpha) -> EffectTable:
    """Full table with the degree-3 splitting row replaced by the
    alpha-parameterized cubic-oracle row."""
    t = table_b().replace("(3|003)", cubic_oracle_row(alpha))
    t.name = f"tableB(alpha={F(alpha)})"
    return t


def lp_alpha_table4(alpha) -> EffectTable:
    """Maximum-degree-4 variant of the alpha-parameterized table."""
    t = table_b4().replace("(3|003)", cubic_oracle_row(alpha))
    t.name = f"tableB4(alpha={F(alpha)})"
    return t


def beta_of_alpha(alpha) -> Fraction:
    """Closed-form optimum of the alpha-parameterized LP on [0, 1/5]."""
    alpha = F(alpha)
    if not 0 <= alpha <= F(1, 5):
        raise ValueError(f"alpha {alpha} outside [0, 1/5]")
    if alpha >= F(1, 9):
        return F(7, 50) + F(3, 10) * alpha
    return F(13, 75)


def beta4_of_alpha(alpha) -> Fraction:
    """Closed-form optimum of the degree-4-restricted LP on [0, 1/5]."""
    alpha = F(alpha)
    if not 0 <= alpha <= F(1, 5):
        raise ValueError(f"alpha {alpha} outside [0, 1/5]")
    if alpha >= F(1, 9):
        return F(1, 8) + F(3, 8) * alpha
    return F(1, 6)


# Exact dual certificates.  The first is the published vector for the coarse
# table.  For the fine table the published (rounded) weights are not exactly
# feasible row by row; the normalization below is, and certifies the same
# 19/100 optimum: weights on edges, degree 4, 3, 2, 1, forces.
DUAL_TABLE_A = (F(1, 5), F(0), F(-1, 20), F(-1, 5), F(-1, 10))
DUAL_TABLE_B = (F(19, 100), F(-1, 200), F(-7, 200), F(-3, 200), F(0), F(-3, 20))


@dataclass
class LpSolution:
    value: Fraction
    primal: list          # weight per table row
    dual: list            # weight per constraint: e, d4, d3, d2, d1[, forces]

    def support(self, table: EffectTable) -> dict:
        return {row.label: x for row, x in zip(table.rows, self.primal) if x}


class _Tableau:
    """Dense simplex tableau over Fractions with Bland's anti-cycling rule."""

    def __init__(self, rows, rhs):
        self.rows = [list(r) for r in rows]   # m x ncols
        self.rhs = list(rhs)
        self.basis = [None] * len(rows)

    def price_out(self, cost, cost_rhs):
        for i, col in enumerate(self.basis):
            if cost[col] != 0:
                f = cost[col]
                for j in range(len(cost)):
                    cost[j] -= f * self.rows[i][j]
                cost_rhs -= f * self.rhs[i]
        return cost_rhs

    def pivot(self, row, col):
        piv = self.rows[row][col]
        self.rows[row] = [v / piv for v in self.rows[row]]
        self.rhs[row] /= piv
        for i in range(len(self.rows)):
            if i != row and self.rows[i][col] != 0:
                f = self.rows[i][col]
                self.rows[i] = [a - f * b
                                for a, b in zip(self.rows[i], self.rows[row])]
                self.rhs[i] -= f * self.rhs[row]
        self.basis[row] = col

    def run(self, cost, cost_rhs, allowed):
        """Maximize; returns the final cost row and objective value."""
        cost_rhs = self.price_out(cost, cost_rhs)
        while True:
            enter = None
            for j in allowed:
                if cost[j] > 0:
                    enter = j
                    break
            if enter is None:
                return cost, cost_rhs
            leave = None
            best = None
            for i in range(len(self.rows)):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (
                            ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                raise InternalError("LP unbounded; effect table is malformed")
            f = cost[enter]
            self.pivot(leave, enter)
            for j in range(len(cost)):
                cost[j] -= f * self.rows[leave][j]
            cost_rhs -= f * self.rhs[leave]


def lp_maximize(table: EffectTable) -> LpSolution:
    """Exact optimum of the depth LP for an effect table.

    The returned primal and dual are checked against each other before
    returning: primal feasibility, dual feasibility, equal objectives, and
    complementary slackness, all in exact arithmetic.
    """
    k = len(table.rows)
    ncon = table.num_constraints
    # tableau columns: k originals, ncon-1 slacks, 1 artificial
    nslack = ncon - 1
    ncols = k + nslack + 1
    art = k + nslack
    rows = []
    rhs = []
    # equality row: e . x + artificial = 1
    row0 = [table.rows[j].destroys[0] for j in range(k)] + [F(0)] * nslack + [F(1)]
    rows.append(row0)
    rhs.append(F(1))
    # inequality rows, negated: -d_i . x + s_i = 0
    for i in range(1, ncon):
        row = [-table.rows[j].column(i) for j in range(k)] + [F(0)] * nslack + [F(0)]
        row[k + i - 1] = F(1)
        rows.append(row)
        rhs.append(F(0))
    tab = _Tableau(rows, rhs)
    tab.basis = [art] + [k + i for i in range(nslack)]

    # phase 1: drive the artificial variable out
    cost1 = [F(0)] * ncols
    cost1[art] = F(-1)
    _, val1 = tab.run(cost1, F(0), allowed=range(ncols))
    if val1 != 0:
        raise InternalError("LP infeasible; effect table is malformed")
    if art in tab.basis:
        i = tab.basis.index(art)
        for j in range(k + nslack):
            if tab.rows[i][j] != 0:
                tab.pivot(i, j)
                break
        if art in tab.basis:
            raise InternalError("artificial variable stuck in the basis")

    # phase 2: the depth objective
    cost2 = [F(0)] * ncols
    for j in range(k):
        cost2[j] = table.rows[j].depth
    final_cost, _ = tab.run(cost2, F(0), allowed=range(k + nslack))

    primal = [F(0)] * k
    for i, col in enumerate(tab.basis):
        if col < k:
            primal[col] = tab.rhs[i]
    value = sum(table.rows[j].depth * primal[j] for j in range(k))

    # duals from the final reduced costs of slack/artificial columns
    y_tab = [-final_cost[art]]
    for i in range(nslack):
        y_tab.append(-final_cost[k + i])
    dual = [y_tab[0]] + [-y for y in y_tab[1:]]

    _certify(table, primal, dual, value)
    return LpSolution(value, primal, dual)


def _certify(table, primal, dual, value):
    k = len(table.rows)
    ncon = table.num_constraints
    if any(x < 0 for x in primal):
        raise InternalError("negative primal weight")
    if sum(table.rows[j].destroys[0] * primal[j] for j in range(k)) != 1:
        raise InternalError("primal violates the edge equality")
    for i in range(1, ncon):
        lhs = sum(table.rows[j].column(i) * primal[j] for j in range(k))
        if lhs < 0:
            raise InternalError(f"primal violates constraint {i}")
        if dual[i] != 0 and lhs != 0:
            raise InternalError(f"complementary slackness fails on constraint {i}")
    if any(y > 0 for y in dual[1:]):
        raise InternalError("inequality dual weight is positive")
    for j in range(k):
        reduced = sum(table.rows[j].column(i) * dual[i] for i in range(ncon))
        if reduced < table.rows[j].depth:
            raise InternalError(f"dual infeasible on row {table.rows[j].label}")
        if primal[j] > 0 and reduced != table.rows[j].depth:
            raise InternalError(
                f"complementary slackness fails on row {table.rows[j].label}")
    if dual[0] != value:
        raise InternalError("dual objective differs from primal optimum")


def verify_dual(table: EffectTable, weights, target) -> bool:
    """Row-wise certificate check.

    True iff the edge weight equals ``target``, every inequality weight is
    <= 0, and for every row the depth is at most the weighted sum of the
    row's destroys/forces entries.  Exact arithmetic throughout.
    """
    ncon = table.num_constraints
    y = [F(w) for w in weights]
    if len(y) != ncon:
        return False
    if y[0] != F(target):
        return False
    if any(w > 0 for w in y[1:]):
        return False
    for row in table.rows:
        total = sum(row.column(i) * y[i] for i in range(ncon))
        if total < row.depth:
            return False
    return True


def tables_to_tsv(table: EffectTable) -> str:
    """Tab-separated dump of a table, for documentation diffs."""
    cols = ["label", "e", "d4", "d3", "d2", "d1"]
    if table.has_forces:
        cols.append("forces")
    cols.append("depth")
    lines = ["\t".join(cols)]
    for row in table.rows:
        cells = [row.label] + [str(x) for x in row.destroys]
        if table.has_forces:
            cells.append(str(row.forces))
        cells.append(str(row.depth))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"
