import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest

from corpus import binary_set_corpus, graph_corpus
from pathcomplete import (
    GraphError,
    LabeledGraph,
    Matrix,
    MatrixSet,
    NegativeEntryError,
    ResourceLimitError,
    build_sigma_w,
    check_path_complete,
    conic_scaling_bound,
    jsr_bounds,
    jsr_lower_bound,
    jsr_upper_bound,
    scale_set,
    spectral_radius_estimate,
)
import pathcomplete.jsr as jsr_module
from pathcomplete.serialize import graph_from_json, load_json, matrix_set_from_json

FIXTURES = Path(__file__).parent / "fixtures"

HALF_I = MatrixSet([Matrix.identity(2).scale(Fraction(1, 2))])
ONE_NODE_M1 = LabeledGraph(1, ("P1",), [("P1", "P1", (1,))])
ONE_NODE_M2 = LabeledGraph(2, ("P1",), [("P1", "P1", (1,)), ("P1", "P1", (2,))])


def unstable_pair():
    return matrix_set_from_json(load_json(FIXTURES / "unstable_pair.json"))


class TestLowerBound:
    def test_identity(self):
        value, word = jsr_lower_bound(MatrixSet([Matrix.identity(2)]), 3)
        assert value == 1.0 and word == (1,)

    def test_unstable_pair(self):
        value, word = jsr_lower_bound(unstable_pair(), 3)
        assert word == (1, 2, 1)
        assert value >= 1.005
        assert value == pytest.approx(1.01, abs=0.005)

    def test_sigma21(self):
        value, word = jsr_lower_bound(build_sigma_w([2, 1]), 3)
        assert value == 1.0
        assert sorted(word) == [1, 1, 2]

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            jsr_lower_bound(unstable_pair(), 30)

    def test_depth(self):
        with pytest.raises(ValueError):
            jsr_lower_bound(unstable_pair(), 0)


class TestUpperBound:
    @pytest.mark.parametrize("t", [1, 2, 5])
    def test_half_identity(self, t):
        assert jsr_upper_bound(HALF_I, t) == 0.5

    def test_sigma21(self):
        assert jsr_upper_bound(build_sigma_w([2, 1]), 3) == 1.0

    def test_dominated_by_largest(self):
        s = MatrixSet([Matrix.identity(2), Matrix.identity(2).scale(2)])
        assert jsr_upper_bound(s, 4) == 2.0

    def test_unstable_pair_brackets(self):
        b = jsr_bounds(unstable_pair(), 3)
        assert b.lower <= b.upper


class TestScaleSet:
    def test_gamma_one(self):
        s = unstable_pair()
        assert scale_set(s, 1) == s

    def test_two_identity(self):
        s = MatrixSet([Matrix.identity(2).scale(2)])
        assert scale_set(s, 2) == MatrixSet([Matrix.identity(2)])

    def test_sigma21_halved(self):
        halved = scale_set(build_sigma_w([2, 1]), 2)
        assert {x for a in halved for row in a for x in row} == {0, Fraction(1, 2)}

    def test_nonpositive(self):
        with pytest.raises(ValueError):
            scale_set(HALF_I, 0)
        with pytest.raises(ValueError):
            scale_set(HALF_I, -1)


class TestProperties:
    def test_sandwich(self):
        for s in binary_set_corpus():
            for t in range(1, 6):
                lower, _ = jsr_lower_bound(s, t)
                assert lower <= jsr_upper_bound(s, t) + 1e-9

    def test_homogeneity(self):
        for s in binary_set_corpus()[:40]:
            for gamma in (2, Fraction(3, 2)):
                scaled = scale_set(s, gamma)
                for t in (1, 3):
                    a, b = jsr_bounds(s, t), jsr_bounds(scaled, t)
                    assert b.lower == pytest.approx(a.lower / float(gamma), abs=1e-9)
                    assert b.upper == pytest.approx(a.upper / float(gamma), abs=1e-9)

    def test_single_matrix_lower_is_the_radius(self):
        for s in binary_set_corpus()[:50]:
            a = s.matrix(1)
            lower, _ = jsr_lower_bound(MatrixSet([a]), 8)
            assert lower == pytest.approx(spectral_radius_estimate(a, jsr_module.REFINE_ITERS), abs=1e-9)
            assert lower <= spectral_radius_estimate(a) + 1e-9

    def test_single_matrix_gap_shrinks_along_doublings(self):
        within = 0
        corpus = binary_set_corpus()
        for s in corpus:
            single = MatrixSet([s.matrix(1)])
            rho = jsr_lower_bound(single, 1)[0]
            gaps = [jsr_upper_bound(single, t) - rho for t in (1, 2, 4, 8, 16)]
            assert all(g >= -1e-9 for g in gaps)
            assert all(b <= a + 1e-9 for a, b in zip(gaps, gaps[1:]))
            within += gaps[3] < 0.05
        # most matrices are already close at t = 8; see the next test for the rest
        assert within > len(corpus) // 2

    def test_polynomial_growth_keeps_gap_open(self):
        # eigenvalue 1 with a Jordan chain: ||A^t|| grows like t^2, so the
        # t-th root approaches 1 only slowly
        a = MatrixSet([Matrix([[1, 0, 1], [0, 1, 0], [0, 1, 1]])])
        assert jsr_lower_bound(a, 8)[0] == pytest.approx(1.0, abs=1e-4)
        assert jsr_upper_bound(a, 8) - 1.0 > 0.5
        assert jsr_upper_bound(a, 64) < jsr_upper_bound(a, 8)


class TestConicScalingBound:
    def test_half_identity(self):
        assert conic_scaling_bound(ONE_NODE_M1, HALF_I) == pytest.approx(0.5, abs=1e-6)

    def test_identity_pair(self):
        s = MatrixSet([Matrix.identity(2), Matrix.identity(2)])
        assert conic_scaling_bound(ONE_NODE_M2, s) == pytest.approx(1.0, abs=1e-6)

    def test_sigma21(self):
        s = build_sigma_w([2, 1])
        gamma = conic_scaling_bound(ONE_NODE_M2, s)
        assert gamma == pytest.approx(1.0, abs=1e-6)
        b = jsr_bounds(s, 6)
        assert b.lower == pytest.approx(1.0, abs=1e-9) and b.upper == pytest.approx(1.0, abs=1e-9)

    def test_complete_pair_on_sigma21(self):
        g = graph_from_json(load_json(FIXTURES / "two_node_complete.json"))
        assert conic_scaling_bound(g, build_sigma_w([2, 1])) == pytest.approx(1.0, abs=1e-6)

    def test_rejects_non_path_complete(self):
        g = graph_from_json(load_json(FIXTURES / "two_node_incomplete.json"))
        with pytest.raises(GraphError):
            conic_scaling_bound(g, build_sigma_w([2, 1]))

    def test_rejects_negative(self):
        with pytest.raises(NegativeEntryError):
            conic_scaling_bound(ONE_NODE_M2, unstable_pair())

    def test_zero_set(self):
        s = MatrixSet([Matrix.zeros(2, 2)])
        assert conic_scaling_bound(ONE_NODE_M1, s) == 0.0

    def test_inconclusive_is_reported_as_none(self, monkeypatch):
        monkeypatch.setattr(jsr_module._ConicFeasibility, "__call__", lambda self, gamma: None)
        s = build_sigma_w([2, 1])
        assert conic_scaling_bound(ONE_NODE_M2, s) is None

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            conic_scaling_bound(ONE_NODE_M1, HALF_I, iter_cap=0)
        with pytest.raises(ValueError):
            conic_scaling_bound(ONE_NODE_M1, HALF_I, tol=0)

    def test_near_critical_pair(self):
        # gamma* = 1 + sqrt(2) for this pair; bisection must not stall next to it
        s = MatrixSet([
            Matrix([[1, 0, 0, 0], [1, 1, 0, 1], [1, 1, 0, 1], [0, 0, 0, 0]]),
            Matrix([[0, 0, 1, 0], [1, 0, 1, 1], [0, 1, 0, 1], [1, 1, 1, 0]]),
        ])
        gamma = conic_scaling_bound(ONE_NODE_M2, s, iter_cap=1)
        assert gamma == pytest.approx(1 + 2**0.5, abs=1e-5)

    def test_one_node_graph_matches_row_selection_oracle(self):
        # with one node and a loop per letter, each coordinate independently
        # picks the row of A_1 or A_2, so gamma* is the largest spectral
        # radius over the 2^n row selections
        np = pytest.importorskip("numpy")
        for s in binary_set_corpus():
            rows = [a.to_numpy() for a in s]
            best = max(
                max(abs(np.linalg.eigvals(np.array([rows[c][l] for l, c in enumerate(choice)]))))
                for choice in itertools.product(range(s.m), repeat=s.dim)
            )
            gamma = conic_scaling_bound(ONE_NODE_M2, s)
            # bisection tolerance plus the relative policy-radius margin
            assert gamma == pytest.approx(best, abs=1e-6 + 1e-7 * best + 1e-9)
            assert gamma >= best - 1e-9

    def test_validity_on_corpus(self):
        # any valid certificate scale upper-bounds the joint spectral radius
        rng = random.Random(17)
        complete = [g for g in graph_corpus() if check_path_complete(g).complete]
        assert complete
        for s in binary_set_corpus():
            g = rng.choice(complete + [ONE_NODE_M2])
            gamma = conic_scaling_bound(g, s)
            assert gamma is not None
            assert jsr_lower_bound(s, 6)[0] <= gamma + 1e-6
            assert gamma <= jsr_upper_bound(s, 1) + 1e-6
