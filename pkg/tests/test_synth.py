import itertools
from pathlib import Path

import pytest

from corpus import non_path_complete_corpus
from pathcomplete import (
    CycleError,
    GraphError,
    GraphIsPathCompleteError,
    InvalidWordError,
    LabeledGraph,
    Matrix,
    build_auxiliary_graph,
    build_sigma_w,
    check_path_complete,
    cycle_product_radius,
    expand_labels,
    is_positive_definite,
    mirror,
    particular_case_check,
    subproduct_containment_check,
    synthesize_conic,
    synthesize_ellipsoidal,
    topological_numbering,
)
from pathcomplete.graphs import contains_factor
from pathcomplete.linalg import mat_vec
from pathcomplete.serialize import graph_from_json, load_json
from pathcomplete.synth import AuxiliaryGraph

FIXTURES = Path(__file__).parent / "fixtures"


def complete_pair():
    return graph_from_json(load_json(FIXTURES / "two_node_complete.json"))


def incomplete_pair():
    return graph_from_json(load_json(FIXTURES / "two_node_incomplete.json"))


def ones_at(n, cells):
    rows = [[0] * n for _ in range(n)]
    for i, j in cells:
        rows[i - 1][j - 1] = 1
    return Matrix(rows)


def cycle_adjacency(n):
    return ones_at(n, [(i, i % n + 1) for i in range(1, n + 1)])


def all_words(max_len, m=2):
    for length in range(1, max_len + 1):
        yield from itertools.product(range(1, m + 1), repeat=length)


class TestSigmaW:
    def test_w21(self):
        s = build_sigma_w([2, 1], 2)
        assert s.dim == 3
        assert s.matrix(1) == ones_at(3, [(2, 3), (3, 1)])
        assert s.matrix(2) == ones_at(3, [(1, 2)])

    def test_w1(self):
        s = build_sigma_w([1], 2)
        assert s.matrix(1) == Matrix([[0, 1], [1, 0]])
        assert s.matrix(2).is_zero

    def test_seven_letter_word(self):
        w = (2, 2, 1, 2, 1, 1, 1)
        s = build_sigma_w(w, 2)
        assert s.dim == 8
        assert s.matrix(2) == ones_at(8, [(1, 2), (2, 3), (4, 5)])
        assert s.matrix(1) == ones_at(8, [(3, 4), (5, 6), (6, 7), (7, 8), (8, 1)])

    def test_empty_word(self):
        with pytest.raises(InvalidWordError):
            build_sigma_w([], 2)

    def test_symbol_out_of_range(self):
        with pytest.raises(InvalidWordError):
            build_sigma_w([3], 2)

    def test_larger_alphabet_gives_zero_matrices(self):
        s = build_sigma_w([2, 1], 4)
        assert s.m == 4 and s.matrix(3).is_zero and s.matrix(4).is_zero

    def test_sum_is_cycle(self):
        for w in all_words(6):
            s = build_sigma_w(w, 2)
            total = s.matrix(1) + s.matrix(2)
            assert s.is_binary
            assert total == cycle_adjacency(len(w) + 1)


class TestCycleProduct:
    @pytest.mark.parametrize("w", [(1,), (2, 1), (2, 2, 1, 2, 1, 1, 1)])
    def test_radius_one(self, w):
        s = build_sigma_w(w, 2)
        product, radius = cycle_product_radius(s, w)
        assert radius == 1
        assert product[0, 0] == 1

    def test_w1_product_is_identity(self):
        product, _ = cycle_product_radius(build_sigma_w([1]), [1])
        assert product == Matrix.identity(2)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            cycle_product_radius(build_sigma_w([2, 1]), [1, 2])

    def test_every_short_word(self):
        for w in all_words(7):
            assert cycle_product_radius(build_sigma_w(w), w)[1] == 1


def containment_by_enumeration(w):
    s = build_sigma_w(w, 2)
    for word in itertools.product((1, 2), repeat=2 * s.dim):
        if not s.product(word).is_zero and not contains_factor(word, w):
            return False
    return True


class TestSubproductContainment:
    @pytest.mark.parametrize("w", [(1,), (2, 1), (2, 2, 1)])
    def test_examples(self, w):
        assert subproduct_containment_check(w, 2)
        assert containment_by_enumeration(w)

    def test_guard(self):
        with pytest.raises(InvalidWordError):
            subproduct_containment_check([1] * 9, 2)

    def test_pruned_search_matches_enumeration(self):
        for w in all_words(3):
            assert subproduct_containment_check(w) == containment_by_enumeration(w)


class TestParticularCase:
    @pytest.mark.parametrize("w", [(2, 2), (1,), (2, 1, 2)])
    def test_examples(self, w):
        assert particular_case_check(w)

    def test_guard(self):
        with pytest.raises(InvalidWordError):
            particular_case_check([1, 2, 1, 2, 1])

    def test_w22_by_full_enumeration(self):
        s = build_sigma_w((2, 2))
        blocks = [s.product(x) for x in itertools.product((1, 2), repeat=2) if x != (2, 2)]
        for combo in itertools.product(blocks, repeat=3):
            prod = Matrix.identity(3)
            for b in combo:
                prod = prod @ b
            assert prod.is_zero

    def test_missing_block_matters(self):
        # keeping A_w itself among the blocks gives a nonvanishing product
        s = build_sigma_w((2, 1))
        a_w = s.product((2, 1)) @ s.matrix(1)
        assert not (a_w @ a_w).is_zero


class TestAuxiliaryGraph:
    def test_no_edges(self):
        g = LabeledGraph(2, ("a", "b"), ())
        aux = build_auxiliary_graph(g, build_sigma_w([1, 2]))
        assert len(aux.nodes) == 6 and aux.edges == ()
        assert aux.is_acyclic()

    def test_incomplete_pair_pipeline_graph_is_acyclic(self):
        g = incomplete_pair()
        w = check_path_complete(g).missing_word
        assert mirror(w) == w == (1, 2, 1)
        aux = build_auxiliary_graph(g, build_sigma_w(mirror(w)))
        assert len(aux.nodes) == 8
        assert aux.is_acyclic()

    def test_path_complete_graph_gives_cycle(self):
        g = complete_pair()
        for w in [(1, 2, 1), (2, 1), (1,), (2, 2, 1, 2, 1, 1, 1)]:
            aux = build_auxiliary_graph(g, build_sigma_w(mirror(w)))
            assert not aux.is_acyclic()

    def test_edge_rule(self):
        g = LabeledGraph(2, ("a", "b"), [("a", "b", (1,))])
        s = build_sigma_w([2, 1])
        aux = build_auxiliary_graph(g, s)
        # A_1 has ones at (2,3) and (3,1): (a,3)->(b,2) and (a,1)->(b,3)
        assert set(aux.edges) == {(("a", 3), ("b", 2), 1), (("a", 1), ("b", 3), 1)}

    def test_rejects_multi_letter_labels(self):
        g = LabeledGraph(2, ("a",), [("a", "a", (1, 2))])
        with pytest.raises(GraphError):
            build_auxiliary_graph(g, build_sigma_w([1]))

    def test_acyclic_on_corpus(self):
        for g in non_path_complete_corpus():
            h = expand_labels(g).graph
            w = check_path_complete(g).missing_word
            assert build_auxiliary_graph(h, build_sigma_w(mirror(w))).is_acyclic()


class TestTopologicalNumbering:
    def test_edgeless_uses_node_order(self):
        aux = AuxiliaryGraph(("x", "y", "z"), ())
        assert topological_numbering(aux) == {"x": 1, "y": 2, "z": 3}

    def test_chain(self):
        aux = AuxiliaryGraph(("c", "b", "a"), (("a", "b", 1), ("b", "c", 1)))
        s = topological_numbering(aux)
        assert s["a"] < s["b"] < s["c"]
        assert sorted(s.values()) == [1, 2, 3]

    def test_incomplete_pair_numbering_respects_edges(self):
        g = incomplete_pair()
        aux = build_auxiliary_graph(g, build_sigma_w([1, 2, 1]))
        s = topological_numbering(aux)
        assert sorted(s.values()) == list(range(1, 9))
        assert all(s[u] < s[v] for u, v, _ in aux.edges)

    def test_cycle_error_carries_cycle(self):
        aux = AuxiliaryGraph(("p", "q", "r", "t"), (("p", "q", 1), ("q", "r", 1), ("r", "q", 2), ("r", "t", 1)))
        with pytest.raises(CycleError) as info:
            topological_numbering(aux)
        cycle = info.value.cycle
        assert set(cycle) == {"q", "r"}
        edges = {(u, v) for u, v, _ in aux.edges}
        assert all((cycle[k], cycle[(k + 1) % len(cycle)]) in edges for k in range(len(cycle)))


def assert_conic_edges(h, s, vectors):
    for e in h.edges:
        image = mat_vec(s.matrix(e.label[0]), vectors[e.src])
        for y, t in zip(image, vectors[e.dst]):
            assert y <= t
            if y > 0:
                assert y < t


class TestSynthesizeConic:
    def test_incomplete_pair(self):
        s, cert, w = synthesize_conic(incomplete_pair())
        assert w == (1, 2, 1)
        assert s == build_sigma_w((1, 2, 1))
        assert s.dim == 4 and s.is_binary
        for v in ("P1", "P2"):
            assert set(cert[v]) <= set(range(1, 9))
        assert_conic_edges(incomplete_pair(), s, cert.vectors)

    def test_incomplete_pair_vectors_are_the_numbering(self):
        _, cert, _ = synthesize_conic(incomplete_pair())
        entries = list(cert["P1"]) + list(cert["P2"])
        assert sorted(entries) == list(range(1, 9))

    def test_one_loop(self):
        g = LabeledGraph(2, ("a",), [("a", "a", (1,))])
        s, cert, w = synthesize_conic(g)
        assert w == (2,)
        assert s.dim == 2
        assert_conic_edges(g, s, cert.vectors)

    def test_path_complete_input(self):
        with pytest.raises(GraphIsPathCompleteError):
            synthesize_conic(complete_pair())

    def test_multi_letter_graph_gets_intermediate_vectors(self):
        g = LabeledGraph(2, ("a",), [("a", "a", (1, 2)), ("a", "a", (2,))])
        exp = expand_labels(g)
        s, cert, w = synthesize_conic(g)
        assert set(cert.vectors) == set(exp.graph.nodes)
        assert_conic_edges(exp.graph, s, cert.vectors)

    def test_deterministic(self):
        assert synthesize_conic(incomplete_pair()) == synthesize_conic(incomplete_pair())

    def test_corpus(self):
        for g in non_path_complete_corpus():
            s, cert, w = synthesize_conic(g)
            h = expand_labels(g).graph
            assert len(w) + 1 == s.dim
            assert cycle_product_radius(s, mirror(w))[1] == 1
            assert_conic_edges(h, s, cert.vectors)


class TestSynthesizeEllipsoidal:
    def check(self, g):
        b, cert, w = synthesize_ellipsoidal(g)
        s = b.transpose()
        h = expand_labels(g).graph
        for v in h.nodes:
            p = cert[v]
            assert p == Matrix.diag([p[l, l] for l in range(p.rows)])
            assert is_positive_definite(p)
        for e in h.edges:
            a = s.matrix(e.label[0])
            image = a @ cert[e.src] @ a.T
            gap = cert[e.dst] - image
            # diagonal image, so semidefiniteness is read off the diagonal
            assert image == Matrix.diag([image[l, l] for l in range(image.rows)])
            for l in range(gap.rows):
                assert gap[l, l] >= 0
                if image[l, l] > 0:
                    assert gap[l, l] > 0
        return b, cert, w

    def test_incomplete_pair(self):
        b, cert, w = self.check(incomplete_pair())
        assert b == build_sigma_w((1, 2, 1)).transpose()
        assert cert["P1"].shape == (4, 4)

    def test_one_loop(self):
        self.check(LabeledGraph(2, ("a",), [("a", "a", (1,))]))

    def test_path_complete_input(self):
        with pytest.raises(GraphIsPathCompleteError):
            synthesize_ellipsoidal(complete_pair())

    def test_corpus(self):
        for g in non_path_complete_corpus(60):
            self.check(g)
