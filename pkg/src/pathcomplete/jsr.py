"""Brute-force joint spectral radius bounds and the conic scaling bound.

For any product ``A_u`` of the family, ``rho(A_u)^(1/|u|)`` is a lower bound
on the joint spectral radius and ``max_{|u|=t} ||A_u||^(1/t)`` is an upper
bound (infinity norm throughout).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GraphError, NegativeEntryError, ResourceLimitError
from .graphs import DEFAULT_WORD_CAP, LabeledGraph, Word, check_path_complete, expand_labels
from .linalg import Matrix, MatrixSet, mat_mul, spectral_radius_estimate, to_exact

log = logging.getLogger(__name__)

DIVERGENCE_CAP = 1e9
DEFAULT_ITER_CAP = 10_000
DEFAULT_BISECTION_TOL = 1e-6
# relative slack when comparing floating iterates
_REL = 1e-12
_GROWTH = 1e-9
# squarings used to score a rotation class in the lower bound
REFINE_ITERS = 50
# eigenvalue accuracy allowance for policy radii near one
_POLICY_MARGIN = 1e-7
_HOWARD_STEPS = 64


@dataclass(frozen=True)
class JsrBounds:
    lower: float
    upper: float
    lower_witness: Word
    depth: int


def _check_cap(m: int, t: int, cap: int) -> None:
    if t < 1:
        raise ValueError("depth must be >= 1")
    if m**t > cap:
        raise ResourceLimitError(f"{m}^{t} products exceed the cap of {cap}")


def _products(s: MatrixSet, length: int):
    """Yield ``(word, A_word)`` for all words of the given length, in lex order."""

    def walk(word, prod):
        if len(word) == length:
            yield word, prod
            return
        for k in range(1, s.m + 1):
            yield from walk(word + (k,), mat_mul(prod, s.matrix(k)))

    yield from walk((), Matrix.identity(s.dim))


def _rotations(w: Word):
    return [w[i:] + w[:i] for i in range(len(w))]


def jsr_lower_bound(
    s: MatrixSet,
    t: int,
    cap_words: int = DEFAULT_WORD_CAP,
    iters: int = 20,
    refine_iters: int = REFINE_ITERS,
) -> tuple[float, Word]:
    """Max of ``rho(A_u)^(1/|u|)`` over ``1 <= |u| <= t`` and a maximizing word.

    Rotations of a word have the same spectral radius, so each rotation
    class is represented by the member with the smallest (tightest)
    ``iters``-step estimate, and scored by a ``refine_iters``-step estimate
    of that member.  Extra squarings matter for non-diagonalizable
    products, where the estimate approaches the radius only like
    ``N^(c/N)``.  Ties go to the class met first in shortlex order.
    """
    _check_cap(s.m, t, cap_words)
    best, witness = -1.0, None
    for length in range(1, t + 1):
        products = dict(_products(s, length))
        estimates = {w: spectral_radius_estimate(p, iters) for w, p in products.items()}
        done = set()
        for w in estimates:
            if w in done:
                continue
            group = _rotations(w)
            done.update(group)
            rep = min(group, key=lambda u: (estimates[u], u))
            rho = estimates[rep]
            if refine_iters > iters and rho > 0:
                rho = spectral_radius_estimate(products[rep], refine_iters)
            value = rho ** (1.0 / length)
            if value > best:
                best, witness = value, rep
    return best, witness


def jsr_upper_bound(s: MatrixSet, t: int, cap_words: int = DEFAULT_WORD_CAP) -> float:
    """``max_{|u| = t} ||A_u||_inf^(1/t)``."""
    _check_cap(s.m, t, cap_words)
    top = max(p.inf_norm() for _, p in _products(s, t))
    return float(top) ** (1.0 / t)


def jsr_bounds(s: MatrixSet, t: int, cap_words: int = DEFAULT_WORD_CAP) -> JsrBounds:
    lower, witness = jsr_lower_bound(s, t, cap_words)
    return JsrBounds(lower, jsr_upper_bound(s, t, cap_words), witness, t)


def scale_set(s: MatrixSet, gamma) -> MatrixSet:
    """``{A / gamma}``; exact for rational ``gamma``."""
    g = to_exact(gamma)
    if g <= 0:
        raise ValueError("gamma must be positive")
    inv = 1 / Fraction(g)
    return MatrixSet(a.scale(inv) for a in s)


class _ConicFeasibility:
    """Is ``{A_k v_i <= gamma v_j for every edge i -k-> j, v >= 1}`` solvable?

    The least solution, if any, is the limit of the ascending iteration
    ``v_j <- max(v_j, A_k v_i / gamma)`` started from all ones.  Besides
    plain stabilisation, two certificates end the iteration early:

    * growth: a subset S of coordinates on which the restricted iterate u
      satisfies ``F(u) > u`` coordinatewise, so the iteration is unbounded;
    * policy: fixing one incoming edge (or the constant 1) per coordinate
      gives a linear map P below F.  If ``rho(P) > 1`` no certificate
      exists; otherwise the fixed point of P is a candidate, improved by
      policy iteration until it satisfies all constraints.
    """

    def __init__(self, g: LabeledGraph, s: MatrixSet, iter_cap: int):
        h = expand_labels(g).graph
        index = {v: i for i, v in enumerate(h.nodes)}
        self.n_nodes = len(h.nodes)
        self.dim = s.dim
        self.edges = [(index[e.src], index[e.dst], e.label[0] - 1) for e in h.edges]
        self.mats = [a.to_numpy() for a in s]
        self.iter_cap = iter_cap

    def _apply(self, v, mats):
        """F(v), plus the edge attaining each coordinate (-1 where none)."""
        out = np.zeros_like(v)
        arg = np.full(v.shape, -1, dtype=int)
        for idx, (i, j, k) in enumerate(self.edges):
            y = mats[k] @ v[i]
            better = y > out[j]
            out[j] = np.where(better, y, out[j])
            arg[j] = np.where(better, idx, arg[j])
        return out, arg

    def _grows(self, v, mats) -> bool:
        keep = v > 0
        while keep.any():
            fu, _ = self._apply(np.where(keep, v, 0.0), mats)
            nxt = keep & (fu > v * (1 + _GROWTH))
            if (nxt == keep).all():
                return True
            keep = nxt
        return False

    def _policy_matrix(self, arg, mats):
        """The linear map obtained by fixing the edge chosen for each coordinate."""
        n, d = self.n_nodes, self.dim
        p = np.zeros((n * d, n * d))
        for j in range(n):
            for l2 in range(d):
                idx = arg[j, l2]
                if idx >= 0:
                    i, _, k = self.edges[idx]
                    p[j * d + l2, i * d : (i + 1) * d] = mats[k][l2]
        return p

    def _policy_iteration(self, v, mats):
        """Howard iteration for the least solution of ``v = max(1, F(v))``.

        A policy picks, per coordinate, one incoming edge or the constant 1.
        Its value solves a linear system; coordinates then switch only where
        another choice is strictly larger.  Values increase monotonically, so
        a repeated policy is final.  Returns True, False or None as
        :meth:`__call__` does.
        """
        fv, arg = self._apply(v, mats)
        arg = np.where(fv > 1.0, arg, -1)
        seen = set()
        for _ in range(_HOWARD_STEPS):
            key = arg.tobytes()
            if key in seen:
                return None
            seen.add(key)
            p = self._policy_matrix(arg, mats)
            # F(v) >= P v, so F(v) <= v with v > 0 forces rho(P) <= 1; radii
            # within the margin of 1 count as infeasible, which only raises gamma
            if max(abs(np.linalg.eigvals(p))) > 1 - _POLICY_MARGIN:
                return False
            b = (arg < 0).reshape(-1).astype(float)
            try:
                cand = np.linalg.solve(np.eye(len(b)) - p, b).reshape(v.shape)
            except np.linalg.LinAlgError:
                return None
            if not np.isfinite(cand).all():
                return None
            fc, arg_c = self._apply(cand, mats)
            if (cand >= 1 - _REL).all() and (fc <= cand * (1 + _REL)).all():
                return True
            best = np.maximum(fc, 1.0)
            switch = best > cand * (1 + _REL)
            if not switch.any():
                return None
            arg = np.where(switch, np.where(fc > 1.0, arg_c, -1), arg)
        return None

    def __call__(self, gamma: float):
        """True (feasible), False (infeasible) or None (inconclusive at the cap)."""
        mats = [a / gamma for a in self.mats]
        v = np.ones((self.n_nodes, self.dim))
        for sweep in range(self.iter_cap):
            fv, _ = self._apply(v, mats)
            if (fv <= v * (1 + _REL)).all():
                return True
            v = np.maximum(v, fv)
            if v.max() > DIVERGENCE_CAP or self._grows(v, mats):
                return False
            # policy iteration is costlier; try it on a doubling schedule
            if sweep & (sweep + 1) == 0:
                verdict = self._policy_iteration(v, mats)
                if verdict is not None:
                    return verdict
        return None


def conic_scaling_bound(
    g: LabeledGraph,
    s: MatrixSet,
    tol: float = DEFAULT_BISECTION_TOL,
    iter_cap: int = DEFAULT_ITER_CAP,
    depth: int = 4,
    cap_words: int = DEFAULT_WORD_CAP,
) -> float | None:
    """Smallest ``gamma`` for which the graph's conic inequalities hold for ``s / gamma``.

    Bisection between a brute-force lower bound and ``max_k ||A_k||_inf``
    (where the all-ones certificate always works).  Repeated-squaring
    estimates can overshoot the radius slightly, so if the lower bound is
    already feasible the search continues below it.  Returns None when a
    feasibility test is inconclusive at ``iter_cap`` sweeps.
    """
    if iter_cap < 1 or tol <= 0:
        raise ValueError("iter_cap and tol must be positive")
    if not s.is_nonnegative:
        raise NegativeEntryError("conic scaling bound needs nonnegative matrices")
    if g.alphabet_size > s.m:
        raise GraphError("graph uses more letters than the matrix set has")
    if not check_path_complete(g).complete:
        raise GraphError("graph is not path-complete; the bound would not be valid")
    hi = jsr_upper_bound(s, 1, cap_words)
    if hi == 0.0:
        return 0.0
    lo = jsr_lower_bound(s, min(depth, _max_depth(s.m, cap_words)), cap_words)[0]
    feasible = _ConicFeasibility(g, s, iter_cap)
    if lo > 0:
        verdict = feasible(lo)
        if verdict is None:
            return None
        if verdict:
            # the estimate may sit slightly above the true radius
            hi, lo = lo, 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        verdict = feasible(mid)
        if verdict is None:
            log.info("feasibility inconclusive at gamma=%r", mid)
            return None
        if verdict:
            hi = mid
        else:
            lo = mid
    return hi


def _max_depth(m: int, cap: int) -> int:
    t = 1
    while m ** (t + 1) <= cap and t < 64:
        t += 1
    return t
