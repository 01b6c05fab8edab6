"""Checking Lyapunov inequalities against a graph, a matrix family and a certificate.

Conic-norm functions ``V_p(x) = max_l x_l / p_l`` live on the nonnegative
orthant and are only used with nonnegative matrices; for them
``V_p(A x) <= V_q(x)`` for all ``x >= 0`` is equivalent to ``A q <= p``.
Ellipsoidal checks reduce to semidefiniteness of a gap matrix.  All
comparisons are exact on rational data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AsymmetricMatrixError, DimensionError, GraphError, NegativeEntryError
from .graphs import Edge, LabeledGraph, expand_labels, mirror
from .linalg import (
    DEFAULT_PD_TOL,
    Matrix,
    MatrixSet,
    Vector,
    is_positive_definite,
    mat_mul,
    mat_vec,
    symmetric_pivots,
)
from .synth import ConicCertificate, EllipsoidalCertificate

PRE = "pre"
POST = "post"
# which end of an edge supplies the source certificate
EDGE = "edge"
REVERSE = "reverse"


def _vec(x) -> Vector:
    return x if isinstance(x, Vector) else Vector(x)


def conic_value(p, x):
    """``inf{lam : x / lam <= p}``, i.e. ``max_l x_l / p_l``; exact on rationals."""
    p, x = _vec(p), _vec(x)
    if p.dim != x.dim:
        raise DimensionError("p and x differ in dimension")
    if not p.is_positive:
        raise ValueError("p must be strictly positive")
    if not x.is_nonnegative:
        raise NegativeEntryError("x must be nonnegative")
    best = max(Fraction(xi) / pi for xi, pi in zip(x, p))
    return best.numerator if best.denominator == 1 else best


def conic_margin(a: Matrix, p_source, p_target, strict_on_support: bool = False):
    """Return ``(holds, slack)`` for ``a @ p_source <= p_target``.

    ``slack`` is the minimum of ``p_target - a @ p_source``.  With
    ``strict_on_support`` the inequality must be strict wherever
    ``a @ p_source`` is positive.
    """
    p_source, p_target = _vec(p_source), _vec(p_target)
    if not a.is_nonnegative:
        raise NegativeEntryError("conic-norm inequalities need a nonnegative matrix")
    if not (a.cols == p_source.dim and a.rows == p_target.dim):
        raise DimensionError("matrix and vectors differ in dimension")
    if not (p_source.is_positive and p_target.is_positive):
        raise ValueError("certificate vectors must be strictly positive")
    image = mat_vec(a, p_source)
    gaps = [t - y for t, y in zip(p_target, image)]
    holds = all(g >= 0 for g in gaps)
    if strict_on_support:
        holds = holds and all(g > 0 for g, y in zip(gaps, image) if y > 0)
    return holds, min(gaps)


def check_conic_inequality(a: Matrix, p_source, p_target, strict_on_support: bool = False) -> bool:
    return conic_margin(a, p_source, p_target, strict_on_support)[0]


def ellipsoidal_gap(a: Matrix, p_source: Matrix, p_target: Matrix, direction: str = PRE) -> tuple[Matrix, Matrix]:
    """Return ``(image, gap)`` where ``gap = p_target - image``.

    ``pre``: ``image = a^T p_source a``.  ``post``: ``image = a p_source a^T``.
    """
    if direction == PRE:
        image = mat_mul(mat_mul(a.T, p_source), a)
    elif direction == POST:
        image = mat_mul(mat_mul(a, p_source), a.T)
    else:
        raise ValueError(f"direction must be {PRE!r} or {POST!r}")
    if image.shape != p_target.shape:
        raise DimensionError("matrix and certificate differ in dimension")
    return image, p_target - image


def ellipsoidal_margin(
    a: Matrix,
    p_source: Matrix,
    p_target: Matrix,
    direction: str = PRE,
    strict: bool = False,
    tol: float = DEFAULT_PD_TOL,
    strict_on_support: bool = False,
):
    """Return ``(holds, slack)``; ``slack`` is the smallest elimination pivot of the gap."""
    for p in (p_source, p_target):
        if not p.is_symmetric(tol):
            raise AsymmetricMatrixError("certificate matrix is not symmetric")
    image, gap = ellipsoidal_gap(a, p_source, p_target, direction)
    psd, pivots = symmetric_pivots(gap, tol)
    slack = min(pivots)
    if strict:
        holds = is_positive_definite(gap, tol)
    else:
        holds = psd
    if strict_on_support:
        n = gap.rows
        holds = holds and all(gap[l, l] > tol for l in range(n) if image[l, l] > 0)
    return holds, slack


def check_ellipsoidal_inequality(
    a: Matrix,
    p_source: Matrix,
    p_target: Matrix,
    direction: str = PRE,
    strict: bool = False,
    tol: float = DEFAULT_PD_TOL,
    strict_on_support: bool = False,
) -> bool:
    return ellipsoidal_margin(a, p_source, p_target, direction, strict, tol, strict_on_support)[0]


@dataclass(frozen=True)
class EdgeCheck:
    edge: Edge
    holds: bool
    slack: object


@dataclass(frozen=True)
class InequalityCheckReport:
    edges: tuple
    # nodes whose certificate matrix is not positive definite
    indefinite_nodes: tuple = ()

    @property
    def overall(self) -> bool:
        return all(e.holds for e in self.edges) and not self.indefinite_nodes

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "indefinite_nodes": list(self.indefinite_nodes),
            "edges": [
                {
                    "from": c.edge.src,
                    "to": c.edge.dst,
                    "label": list(c.edge.label),
                    "holds": c.holds,
                    "slack": str(c.slack),
                }
                for c in self.edges
            ],
        }


def edge_matrix(s: MatrixSet, label, direction: str = POST, orientation: str = EDGE) -> Matrix:
    """Matrix checked on an edge with the given label.

    Conic checks, and ellipsoidal ``post`` checks oriented along the edge,
    use ``A_{u_t} ... A_{u_1}`` (the product of the reversed label), which is
    what chaining the single-letter inequalities produces.  ``pre`` along
    the edge composes the other way round, and reversing the orientation
    swaps the two.  For single letters all of these are ``A_k``.
    """
    forward = (direction == PRE) == (orientation == EDGE)
    return s.product(label) if forward else s.product(mirror(label))


def verify_certificate(
    g: LabeledGraph,
    s: MatrixSet,
    cert: ConicCertificate | EllipsoidalCertificate,
    *,
    strict_on_support: bool = False,
    direction: str = PRE,
    strict: bool = False,
    tol: float = DEFAULT_PD_TOL,
    orientation: str = EDGE,
) -> InequalityCheckReport:
    """Check every edge ``i -> j`` of ``g`` with source ``cert[i]`` and target ``cert[j]``.

    Conic certificates need ``A v_i <= v_j``.  Ellipsoidal certificates need
    ``P_j - A^T P_i A`` (``pre``) or ``P_j - A P_i A^T`` (``post``) to be
    semidefinite.  ``orientation="reverse"`` swaps the roles of ``cert[i]``
    and ``cert[j]`` for ellipsoidal checks; with ``pre`` this is the
    quadratic-form reading ``x^T A^T P_j A x <= x^T P_i x`` of the edge.

    If the certificate also covers the intermediate nodes of the
    letter-expanded graph, the expanded edges are checked one letter at a
    time; otherwise each multi-letter edge is checked with its composed
    product (see :func:`edge_matrix`).  ``direction`` and ``strict`` apply
    to ellipsoidal certificates only.
    """
    if isinstance(cert, ConicCertificate):
        table = cert.vectors
    elif isinstance(cert, EllipsoidalCertificate):
        table = cert.matrices
    else:
        raise TypeError("unknown certificate type")
    if g.alphabet_size > s.m:
        raise DimensionError("graph uses more letters than the matrix set has")
    missing = [v for v in g.nodes if v not in table]
    if missing:
        raise GraphError(f"certificate has no entry for node(s) {missing}")
    graph = g
    if not g.single_letter:
        expanded = expand_labels(g).graph
        if all(v in table for v in expanded.nodes):
            graph = expanded
    results = []
    for e in graph.edges:
        if isinstance(cert, ConicCertificate):
            a = edge_matrix(s, e.label)
            holds, slack = conic_margin(a, table[e.src], table[e.dst], strict_on_support)
        else:
            if orientation not in (EDGE, REVERSE):
                raise ValueError(f"orientation must be {EDGE!r} or {REVERSE!r}")
            a = edge_matrix(s, e.label, direction, orientation)
            src, dst = (e.src, e.dst) if orientation == EDGE else (e.dst, e.src)
            holds, slack = ellipsoidal_margin(
                a, table[src], table[dst], direction, strict, tol, strict_on_support
            )
        results.append(EdgeCheck(e, holds, slack))
    indefinite = ()
    if isinstance(cert, EllipsoidalCertificate):
        indefinite = tuple(v for v in graph.nodes if not is_positive_definite(table[v], tol))
    return InequalityCheckReport(tuple(results), indefinite)


def verify_common_quadratic(s: MatrixSet, p: Matrix, tol: float = DEFAULT_PD_TOL) -> bool:
    """``p > 0`` and ``A^T p A < p`` for every matrix of the family, strictly."""
    if p.shape != (s.dim, s.dim):
        raise DimensionError("p and the matrix family differ in dimension")
    if not is_positive_definite(p, tol):
        return False
    return all(
        is_positive_definite(p - mat_mul(mat_mul(a.T, p), a), tol) for a in s
    )
