"""Counterexamples for non-path-complete inequality graphs.

Given a word ``w`` that no path can read, :func:`build_sigma_w` produces a
family of 0/1 matrices whose summed digraph is a single cycle spelling
``w`` followed by the letter 1.  The family has spectral radius at least
one, yet it satisfies every inequality of the graph: the certificate comes
from a topological numbering of an auxiliary graph on
``(node, coordinate)`` pairs, which is acyclic precisely because ``w`` is
unreadable.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, NamedTuple

from .errors import (
    CycleError,
    GraphError,
    GraphIsPathCompleteError,
    InvalidWordError,
)
from .graphs import (
    LabeledGraph,
    Word,
    as_word,
    check_path_complete,
    contains_factor,
    expand_labels,
    mirror,
)
from .linalg import Matrix, MatrixSet, Vector, mat_mul, partial_map_radius

MAX_SUBPRODUCT_WORD = 8
MAX_PARTICULAR_WORD = 4


@dataclass(frozen=True)
class ConicCertificate:
    """Positive vector per node; node ``i`` carries ``V(x) = max_l x_l / v_i[l]``."""

    vectors: dict

    def __getitem__(self, node) -> Vector:
        return self.vectors[node]


@dataclass(frozen=True)
class EllipsoidalCertificate:
    """Symmetric positive definite matrix per node."""

    matrices: dict

    def __getitem__(self, node) -> Matrix:
        return self.matrices[node]


class Counterexample(NamedTuple):
    matrices: MatrixSet
    certificate: ConicCertificate | EllipsoidalCertificate
    missing_word: Word


@dataclass(frozen=True)
class AuxiliaryGraph:
    nodes: tuple  # (graph node, coordinate 1..n)
    edges: tuple  # ((i, l), (j, l2), symbol)

    def is_acyclic(self) -> bool:
        try:
            topological_numbering(self)
        except CycleError:
            return False
        return True


def build_sigma_w(w, m: int = 2) -> MatrixSet:
    """Binary family on the cycle ``1 -> 2 -> ... -> n -> 1`` with ``n = |w|+1``.

    Edge ``i -> i+1`` belongs to ``A_{w_i}`` and the closing edge ``n -> 1``
    to ``A_1``; letters absent from ``w`` get the zero matrix.
    """
    if m < 1:
        raise ValueError("alphabet size must be >= 1")
    w = as_word(w, m)
    n = len(w) + 1
    mats = [[[0] * n for _ in range(n)] for _ in range(m)]
    for i, letter in enumerate(w):
        mats[letter - 1][i][i + 1] = 1
    mats[0][n - 1][0] = 1
    return MatrixSet(Matrix(a) for a in mats)


def cycle_product_radius(s: MatrixSet, w) -> tuple[Matrix, int]:
    """``A_w A_1`` for ``s = build_sigma_w(w)`` and its spectral radius (exactly 1)."""
    w = as_word(w, s.m)
    if s != build_sigma_w(w, s.m):
        raise ValueError("matrix set was not built from this word")
    product = mat_mul(s.product(w), s.matrix(1))
    radius = partial_map_radius(product)
    if radius is None:
        raise AssertionError("cycle product is not a partial-map matrix")
    return product, radius


def subproduct_containment_check(w, m: int = 2) -> bool:
    """Every nonzero product of ``2n`` factors from ``build_sigma_w(w)`` spells ``w``.

    Exhaustive over index words; a zero prefix prunes all its extensions.
    """
    w = as_word(w, m)
    if len(w) > MAX_SUBPRODUCT_WORD:
        raise InvalidWordError(f"word longer than {MAX_SUBPRODUCT_WORD}")
    s = build_sigma_w(w, m)
    depth = 2 * s.dim

    def walk(prefix, product):
        if len(prefix) == depth:
            return contains_factor(prefix, w)
        for k in range(1, m + 1):
            nxt = mat_mul(product, s.matrix(k))
            if not nxt.is_zero and not walk(prefix + (k,), nxt):
                return False
        return True

    return walk((), Matrix.identity(s.dim))


def particular_case_check(w) -> bool:
    """All products of ``n`` blocks from ``{A_x : |x| = |w|, x != w}`` vanish.

    Works over the two-letter alphabet.  Products are enumerated level by
    level; prefixes that multiply to the same matrix have the same
    extensions, so each level keeps one copy of each distinct nonzero matrix.
    """
    w = as_word(w, 2)
    if len(w) > MAX_PARTICULAR_WORD:
        raise InvalidWordError(f"word longer than {MAX_PARTICULAR_WORD}")
    s = build_sigma_w(w, 2)
    blocks = [
        s.product(x) for x in itertools.product((1, 2), repeat=len(w)) if x != w
    ]
    level = {b for b in blocks if not b.is_zero}
    for _ in range(s.dim - 1):
        level = {p for a in level for b in blocks if not (p := mat_mul(a, b)).is_zero}
        if not level:
            return True
    return not level


def build_auxiliary_graph(g: LabeledGraph, s: MatrixSet) -> AuxiliaryGraph:
    """Edge ``(i,l) -> (j,l2)`` with symbol k iff ``(A_k)[l2,l] != 0`` and g has ``i -k-> j``."""
    if not g.single_letter:
        raise GraphError("auxiliary graph needs single-letter labels; expand first")
    if g.alphabet_size > s.m:
        raise GraphError("graph alphabet is larger than the matrix set")
    n = s.dim
    nodes = tuple((v, l) for v in g.nodes for l in range(1, n + 1))
    edges = []
    seen = set()
    for e in g.edges:
        k = e.label[0]
        a = s.matrix(k)
        for l2 in range(n):
            for l in range(n):
                if a[l2, l]:
                    edge = ((e.src, l + 1), (e.dst, l2 + 1), k)
                    if edge not in seen:
                        seen.add(edge)
                        edges.append(edge)
    return AuxiliaryGraph(nodes, tuple(edges))


def topological_numbering(aux: AuxiliaryGraph) -> dict:
    """Kahn numbering ``1..N``, always releasing the earliest ready node first."""
    order = {v: i for i, v in enumerate(aux.nodes)}
    indeg = {v: 0 for v in aux.nodes}
    succ: dict[Hashable, list] = {v: [] for v in aux.nodes}
    for src, dst, _ in aux.edges:
        succ[src].append(dst)
        indeg[dst] += 1
    ready = [order[v] for v in aux.nodes if indeg[v] == 0]
    heapq.heapify(ready)
    numbering = {}
    while ready:
        v = aux.nodes[heapq.heappop(ready)]
        numbering[v] = len(numbering) + 1
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(ready, order[u])
    if len(numbering) < len(aux.nodes):
        raise CycleError("auxiliary graph has a cycle", _find_cycle(aux, numbering))
    return numbering


def _find_cycle(aux: AuxiliaryGraph, done: dict) -> list:
    # every node Kahn left behind has a predecessor that was also left behind
    pred = {}
    for src, dst, _ in aux.edges:
        if src not in done and dst not in done:
            pred.setdefault(dst, src)
    v = next(u for u in aux.nodes if u not in done)
    path = []
    pos = {}
    while v not in pos:
        pos[v] = len(path)
        path.append(v)
        v = pred[v]
    return list(reversed(path[pos[v]:]))


def synthesize_conic(g: LabeledGraph) -> Counterexample:
    """Unstable 0/1 family plus conic-norm certificate for a non-path-complete graph.

    The certificate has one vector per node of ``expand_labels(g).graph``;
    original nodes keep their ids.  For each expanded edge ``i -k-> j`` it
    satisfies ``A_k v_i <= v_j`` with strict inequality wherever the left
    side is nonzero.
    """
    verdict = check_path_complete(g)
    if verdict.complete:
        raise GraphIsPathCompleteError("graph is path-complete; no counterexample exists")
    w = verdict.missing_word
    h = expand_labels(g).graph
    s = build_sigma_w(mirror(w), max(g.alphabet_size, 1))
    numbering = topological_numbering(build_auxiliary_graph(h, s))
    vectors = {
        v: Vector(numbering[(v, l)] for l in range(1, s.dim + 1)) for v in h.nodes
    }
    return Counterexample(s, ConicCertificate(vectors), w)


def synthesize_ellipsoidal(g: LabeledGraph) -> Counterexample:
    """Transposed family with diagonal certificates ``P_i = diag(v_i)``.

    With ``B_k`` the returned matrices, every expanded edge ``i -k-> j``
    satisfies ``P_j - B_k^T P_i B_k >= 0``, the gap being strictly positive
    on the diagonal wherever ``B_k^T P_i B_k`` is nonzero.
    """
    s, cert, w = synthesize_conic(g)
    mats = {v: Matrix.diag(vec.entries) for v, vec in cert.vectors.items()}
    return Counterexample(s.transpose(), EllipsoidalCertificate(mats), w)


def synthesize_ellipsoidal_direct(g: LabeledGraph) -> Counterexample:
    """Untransposed family with ``P_i = diag(1 / v_i)``.

    Here every expanded edge ``i -k-> j`` satisfies
    ``A_k^T P_j A_k <= P_i``, i.e. ``V_j(A_k x) <= V_i(x)`` for
    ``V_i(x) = x^T P_i x``; verify with ``direction="pre",
    orientation="reverse"``.
    """
    s, cert, w = synthesize_conic(g)
    mats = {
        v: Matrix.diag([Fraction(1, x) for x in vec.entries]) for v, vec in cert.vectors.items()
    }
    return Counterexample(s, EllipsoidalCertificate(mats), w)
