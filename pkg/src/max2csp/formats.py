"""Text formats: native CSP, DIMACS edge lists, WCNF (arity <= 2), MIS.

The native format is line based with 1-based ids:

    c <comment>
    p csp <n> <r>
    s <niladic>
    n <v> <r integers>
    e <u> <v> <r*r integers row-major>

Edge lines require u < v; at most one n-line per vertex and one e-line per
pair.  ``emit_csp`` writes the canonical form (header, s-line, n-lines
ascending, e-lines ascending), and parsing it back is the identity.
"""

from __future__ import annotations

from .core import Instance, encode_max_cut, encode_max_dicut, encode_max_2sat, encode_mis

FORMATS = ("csp", "maxcut-dimacs", "wcnf", "mis")


class FormatError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _tokens(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def _ints(lineno, parts):
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise FormatError(lineno, f"expected integers, got {parts}") from exc


def parse_csp(text: str) -> Instance:
    inst = None
    pending_edges = []
    for lineno, parts in _tokens(text):
        tag = parts[0]
        if tag == "p":
            if inst is not None:
                raise FormatError(lineno, "duplicate problem line")
            if len(parts) != 4 or parts[1] != "csp":
                raise FormatError(lineno, "expected 'p csp <n> <r>'")
            n, r = _ints(lineno, parts[2:])
            inst = Instance(r)
            for v in range(1, n + 1):
                inst.add_vertex(v)
        elif inst is None:
            raise FormatError(lineno, "data before 'p csp' line")
        elif tag == "s":
            (inst.niladic,) = _ints(lineno, parts[1:])
        elif tag == "n":
            vals = _ints(lineno, parts[1:])
            v, scores = vals[0], vals[1:]
            if not inst.has_vertex(v):
                raise FormatError(lineno, f"vertex {v} out of range")
            if len(scores) != inst.r:
                raise FormatError(lineno, f"expected {inst.r} scores")
            inst.monadic[v] = scores
        elif tag == "e":
            vals = _ints(lineno, parts[1:])
            u, v, scores = vals[0], vals[1], vals[2:]
            if not (inst.has_vertex(u) and inst.has_vertex(v)):
                raise FormatError(lineno, f"edge ({u},{v}) out of range")
            if u >= v:
                raise FormatError(lineno, f"edge needs u < v, got {u} {v}")
            if len(scores) != inst.r * inst.r:
                raise FormatError(lineno, f"expected {inst.r * inst.r} scores")
            if inst.has_edge(u, v):
                raise FormatError(lineno, f"duplicate edge ({u},{v})")
            r = inst.r
            table = [scores[i * r:(i + 1) * r] for i in range(r)]
            pending_edges.append((lineno, u, v, table))
        else:
            raise FormatError(lineno, f"unknown line tag '{tag}'")
    if inst is None:
        raise FormatError(1, "missing 'p csp' line")
    for lineno, u, v, table in pending_edges:
        inst.add_edge(u, v, table)
    return inst


def emit_csp(inst: Instance) -> str:
    verts = sorted(inst.vertices())
    lines = [f"p csp {len(verts)} {inst.r}", f"s {inst.niladic}"]
    for v in verts:
        lines.append("n " + " ".join([str(v)] + [str(x) for x in inst.monadic[v]]))
    for (u, v) in sorted(inst.edges()):
        flat = [str(x) for row in inst.dyadic[(u, v)] for x in row]
        lines.append("e " + " ".join([str(u), str(v)] + flat))
    return "\n".join(lines) + "\n"


def parse_maxcut_dimacs(text: str) -> Instance:
    n = None
    edges = []
    weights = {}
    for lineno, parts in _tokens(text):
        tag = parts[0]
        if tag == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "edges"):
                raise FormatError(lineno, "expected 'p edge <n> <m>'")
            n = _ints(lineno, parts[2:])[0]
        elif tag == "e":
            vals = _ints(lineno, parts[1:])
            if len(vals) not in (2, 3):
                raise FormatError(lineno, "expected 'e u v [w]'")
            u, v = vals[0], vals[1]
            if u == v:
                raise FormatError(lineno, f"loop edge at {u}")
            key = (min(u, v), max(u, v))
            if key in weights:
                raise FormatError(lineno, f"duplicate edge {key}")
            weights[key] = vals[2] if len(vals) == 3 else 1
            edges.append(key)
        else:
            raise FormatError(lineno, f"unknown line tag '{tag}'")
    vertices = range(1, n + 1) if n else None
    return encode_max_cut(edges, weights, vertices=vertices)


def parse_wcnf(text: str) -> Instance:
    nvars = None
    clauses = []
    for lineno, parts in _tokens(text):
        if parts[0] == "p":
            if len(parts) < 4 or parts[1] != "wcnf":
                raise FormatError(lineno, "expected 'p wcnf <n> <m> [top]'")
            nvars = _ints(lineno, parts[2:3])[0]
            continue
        vals = _ints(lineno, parts)
        if vals[-1] != 0:
            raise FormatError(lineno, "clause must end with 0")
        weight, lits = vals[0], tuple(vals[1:-1])
        if weight <= 0:
            raise FormatError(lineno, f"non-positive weight {weight}")
        if len(lits) == 0:
            raise FormatError(lineno, "empty clause")
        if len(lits) > 2:
            raise FormatError(lineno, f"clause arity {len(lits)} > 2")
        clauses.append((lits, weight))
    return encode_max_2sat(clauses, num_vars=nvars)


def parse_mis(text: str) -> Instance:
    edges = []
    weights = {}
    n = None
    for lineno, parts in _tokens(text):
        tag = parts[0]
        if tag == "p":
            n = _ints(lineno, parts[-2:])[0]
        elif tag == "e":
            u, v = _ints(lineno, parts[1:])
            if u == v:
                raise FormatError(lineno, f"loop edge at {u}")
            edges.append((u, v))
        elif tag == "w":
            v, w = _ints(lineno, parts[1:])
            weights[v] = w
        else:
            raise FormatError(lineno, f"unknown line tag '{tag}'")
    vertices = range(1, n + 1) if n else None
    return encode_mis(edges, weights, vertices=vertices)


def parse(fmt: str, text: str) -> Instance:
    if fmt == "csp":
        return parse_csp(text)
    if fmt == "maxcut-dimacs":
        return parse_maxcut_dimacs(text)
    if fmt == "wcnf":
        return parse_wcnf(text)
    if fmt == "mis":
        return parse_mis(text)
    raise ValueError(f"unknown format '{fmt}' (choose from {FORMATS})")
