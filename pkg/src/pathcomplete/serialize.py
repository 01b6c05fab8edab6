"""JSON encodings for matrices, graphs, automata, certificates and bundles.

Numbers are written as JSON integers when integral and as ``"p/q"``
strings otherwise; on input, integers, decimal strings (``"0.7"``) and
fraction strings are all read exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import SchemaError
from .graphs import Edge, LabeledGraph, Nfa, expand_labels
from .linalg import Matrix, MatrixSet, Vector, to_exact
from .synth import ConicCertificate, Counterexample, EllipsoidalCertificate


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def number_to_json(x):
    x = to_exact(x)
    return x if isinstance(x, int) else str(x)


def number_from_json(x):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise SchemaError(f"expected a number, got {x!r}")
    try:
        return to_exact(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad number {x!r}") from exc


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{where}: {key!r} has the wrong type")
    return value


def matrix_to_json(a: Matrix) -> dict:
    return {
        "rows": a.rows,
        "cols": a.cols,
        "data": [[number_to_json(x) for x in row] for row in a],
    }


def matrix_from_json(obj, where="matrix") -> Matrix:
    rows = _require(obj, "rows", int, where)
    cols = _require(obj, "cols", int, where)
    data = _require(obj, "data", list, where)
    if len(data) != rows or any(not isinstance(r, list) or len(r) != cols for r in data):
        raise SchemaError(f"{where}: data does not match rows={rows}, cols={cols}")
    return Matrix([[number_from_json(x) for x in row] for row in data])


def matrix_set_to_json(s: MatrixSet) -> list:
    return [matrix_to_json(a) for a in s]


def matrix_set_from_json(obj) -> MatrixSet:
    if isinstance(obj, dict):
        obj = _require(obj, "matrices", list, "matrices file")
    if not isinstance(obj, list) or not obj:
        raise SchemaError("expected a nonempty list of matrices")
    return MatrixSet(matrix_from_json(a, f"matrix {k + 1}") for k, a in enumerate(obj))


def _node_id(x, where):
    if not isinstance(x, (str, int)) or isinstance(x, bool):
        raise SchemaError(f"{where}: node ids must be strings or integers")
    return x


def graph_to_json(g: LabeledGraph) -> dict:
    return {
        "alphabet_size": g.alphabet_size,
        "nodes": list(g.nodes),
        "edges": [{"from": e.src, "to": e.dst, "label": list(e.label)} for e in g.edges],
    }


def graph_from_json(obj) -> LabeledGraph:
    m = _require(obj, "alphabet_size", int, "graph")
    nodes = [_node_id(v, "graph") for v in _require(obj, "nodes", list, "graph")]
    edges = []
    for k, e in enumerate(obj.get("edges", [])):
        where = f"graph edge {k}"
        label = _require(e, "label", list, where)
        if any(not isinstance(a, int) or isinstance(a, bool) for a in label):
            raise SchemaError(f"{where}: labels are lists of integer symbols")
        edges.append(Edge(_node_id(e.get("from"), where), _node_id(e.get("to"), where), tuple(label)))
    try:
        return LabeledGraph(m, tuple(nodes), tuple(edges))
    except ValueError as exc:
        raise SchemaError(f"graph: {exc}") from exc


def nfa_to_json(n: Nfa) -> dict:
    return {
        "alphabet_size": n.alphabet_size,
        "states": list(n.states),
        "initial": list(n.initial),
        "accepting": list(n.accepting),
        "transitions": [[s, a, t] for s, a, t in n.transitions],
    }


def nfa_from_json(obj) -> Nfa:
    m = _require(obj, "alphabet_size", int, "nfa")
    states = _require(obj, "states", list, "nfa")
    initial = _require(obj, "initial", list, "nfa")
    accepting = _require(obj, "accepting", list, "nfa")
    transitions = []
    for k, t in enumerate(obj.get("transitions", [])):
        if not isinstance(t, list) or len(t) != 3:
            raise SchemaError(f"nfa transition {k}: expected [state, symbol, state]")
        transitions.append(tuple(t))
    try:
        return Nfa(m, tuple(states), tuple(initial), tuple(accepting), tuple(transitions))
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"nfa: {exc}") from exc


def certificate_to_json(cert) -> dict:
    if isinstance(cert, ConicCertificate):
        return {str(v): [number_to_json(x) for x in vec] for v, vec in cert.vectors.items()}
    return {
        str(v): [[number_to_json(x) for x in row] for row in p] for v, p in cert.matrices.items()
    }


def _guess_family(obj: dict) -> str:
    first = next(iter(obj.values()))
    if isinstance(first, dict) or (isinstance(first, list) and first and isinstance(first[0], list)):
        return "ellipsoidal"
    return "conic"


def certificate_from_json(obj, family: str | None = None):
    """Read a certificate map, or pull it out of a counterexample bundle."""
    if not isinstance(obj, dict):
        raise SchemaError("certificate must be a JSON object")
    if family is None and "family" in obj:
        family = obj["family"]
    for fam in ("conic", "ellipsoidal"):
        key = f"{fam}_certificate"
        if key in obj and family in (None, fam):
            obj, family = obj[key], fam
            break
    if not isinstance(obj, dict) or not obj:
        raise SchemaError("certificate map is empty")
    if family is None:
        family = _guess_family(obj)
    if family == "conic":
        vectors = {}
        for v, vec in obj.items():
            if not isinstance(vec, list):
                raise SchemaError(f"conic certificate for {v!r} must be a list")
            vectors[v] = Vector(number_from_json(x) for x in vec)
        return ConicCertificate(vectors)
    if family == "ellipsoidal":
        mats = {}
        for v, p in obj.items():
            if isinstance(p, dict):
                mats[v] = matrix_from_json(p, f"certificate {v!r}")
            elif isinstance(p, list) and all(isinstance(r, list) for r in p):
                mats[v] = Matrix([[number_from_json(x) for x in r] for r in p])
            else:
                raise SchemaError(f"ellipsoidal certificate for {v!r} must be a matrix")
        return EllipsoidalCertificate(mats)
    raise SchemaError(f"unknown certificate family {family!r}")


def with_string_nodes(g: LabeledGraph) -> LabeledGraph:
    """Same graph with every node id converted to ``str`` (JSON object keys)."""
    if all(isinstance(v, str) for v in g.nodes):
        return g
    return LabeledGraph(
        g.alphabet_size,
        tuple(str(v) for v in g.nodes),
        tuple(Edge(str(e.src), str(e.dst), e.label) for e in g.edges),
    )


def bundle_to_json(g: LabeledGraph, cx: Counterexample, family: str) -> dict:
    exp = expand_labels(g)
    expanded = {}
    for v in exp.graph.nodes:
        if v in exp.intermediates:
            edge, pos = exp.intermediates[v]
            expanded[str(v)] = {"kind": "intermediate", "edge": edge, "position": pos}
        else:
            expanded[str(v)] = {"kind": "node"}
    return {
        "family": family,
        "missing_word": list(cx.missing_word),
        "matrices": matrix_set_to_json(cx.matrices),
        f"{family}_certificate": certificate_to_json(cx.certificate),
        "expanded_nodes": expanded,
    }

