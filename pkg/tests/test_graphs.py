import io

import numpy as np
import pytest

from gralign import (
    Graph,
    ProbVector,
    degree_sequence,
    edge_list_text,
    induced_bigraph,
    induced_subgraph,
    read_edge_list,
    sample_correlated_er,
    write_edge_list,
)


def er_graph(n, p_edge, seed):
    return sample_correlated_er(n, ProbVector.from_edge_prob(p_edge), seed).ga


def path_graph(n):
    return Graph.from_edges(n, range(n - 1), range(1, n))


class TestGraphType:
    def test_rejects_self_loops(self):
        dense = np.zeros((3, 3), dtype=bool)
        dense[1, 1] = True
        with pytest.raises(ValueError, match="self-loop"):
            Graph(dense)

    def test_rejects_asymmetry(self):
        dense = np.zeros((3, 3), dtype=bool)
        dense[0, 1] = True
        with pytest.raises(ValueError, match="symmetric"):
            Graph(dense)

    def test_rejects_empty_vertex_set(self):
        with pytest.raises(ValueError):
            Graph(np.zeros((0, 0), dtype=bool))

    def test_from_edges_validates(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [0], [3])
        with pytest.raises(ValueError):
            Graph.from_edges(3, [1], [1])

    def test_duplicate_edges_collapse(self):
        g = Graph.from_edges(3, [0, 0], [1, 1])
        assert g.num_edges == 1

    def test_immutable(self):
        g = path_graph(3)
        with pytest.raises(AttributeError):
            g.n = 5
        with pytest.raises(ValueError):
            g.bits[0, 0] = 1

    @pytest.mark.parametrize("seed", range(6))
    def test_constructor_invariants(self, seed):
        # symmetry, loop-freeness, and degree cache, bit by bit (n <= 64)
        rng = np.random.Generator(np.random.PCG64(seed))
        n = int(rng.integers(2, 65))
        g = er_graph(n, float(rng.uniform(0.05, 0.9)), seed)
        dense = g.dense()
        assert np.array_equal(dense, dense.T)
        assert not np.any(np.diagonal(dense))
        assert np.array_equal(g.degrees, dense.sum(axis=1))
        for v in range(n):
            assert g.degree(v) == sum(g.has_edge(v, u) for u in range(n) if u != v)

    def test_complete_and_empty(self):
        assert Graph.complete(5).num_edges == 10
        assert Graph.empty(5).num_edges == 0


class TestDegreeSequence:
    def test_path_graph(self):
        assert degree_sequence(path_graph(3)).pairs() == [(1, 2), (0, 1), (2, 1)]

    def test_empty_graph_tie_break(self):
        assert degree_sequence(Graph.empty(3)).pairs() == [(0, 0), (1, 0), (2, 0)]

    def test_matches_independent_recount(self):
        g = er_graph(5, 0.5, 42)
        # recount degrees straight off the bit rows, sort independently
        counted = [(v, sum(g.has_edge(v, u) for u in range(5) if u != v)) for v in range(5)]
        expected = sorted(counted, key=lambda t: (-t[1], t[0]))
        assert degree_sequence(g).pairs() == expected

    @pytest.mark.parametrize("seed", range(4))
    def test_is_permutation_of_popcounts(self, seed):
        g = er_graph(40, 0.3, seed)
        seq = degree_sequence(g)
        assert sorted(seq.degrees.tolist()) == sorted(g.degrees.tolist())
        assert sorted(seq.vertices.tolist()) == list(range(40))
        assert np.all(np.diff(seq.degrees) <= 0)


class TestInducedSubgraph:
    def test_triangle_keep_two(self):
        tri = Graph.complete(3)
        sub = induced_subgraph(tri, [0, 1])
        assert sub.n == 2 and sub.num_edges == 1

    def test_keep_all_is_identity(self):
        g = er_graph(12, 0.4, 3)
        assert induced_subgraph(g, range(12)) == g

    def test_matches_edge_list_filter(self):
        g = er_graph(8, 0.5, 7)
        keep = [1, 2, 4, 6, 7]
        sub = induced_subgraph(g, keep)
        # oracle: filter the original edge list by hand
        expected = set()
        for i, u in enumerate(keep):
            for j, v in enumerate(keep):
                if i < j and g.has_edge(u, v):
                    expected.add((i, j))
        actual = set(zip(*(a.tolist() for a in sub.edges())))
        assert actual == expected

    def test_monotone(self):
        g = er_graph(15, 0.4, 11)
        keep1 = [0, 2, 3, 5, 8, 9, 12, 14]
        keep2 = [2, 3, 4, 5, 9, 10, 12]
        inter = sorted(set(keep1) & set(keep2))

        def orig_edges(keep):
            sub = induced_subgraph(g, keep)
            us, vs = sub.edges()
            return {(keep[u], keep[v]) for u, v in zip(us, vs)}

        assert orig_edges(inter) <= orig_edges(keep1)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            induced_subgraph(path_graph(3), [0, 5])


class TestInducedBigraph:
    def test_star_center_row_all_ones(self):
        star = Graph.from_edges(5, [0] * 4, [1, 2, 3, 4])
        big = induced_bigraph(star, [0], [1, 2, 3, 4])
        assert big.dense().tolist() == [[True] * 4]

    def test_isolated_left_vertex_zero_row(self):
        g = Graph.from_edges(4, [1], [2])
        big = induced_bigraph(g, [3], [1, 2])
        assert big.dense().tolist() == [[False, False]]

    def test_matches_edge_lookups(self):
        g = er_graph(10, 0.5, 3)
        anchors = [4, 1, 9]
        left = [0, 7]
        big = induced_bigraph(g, left, anchors)
        for i, u in enumerate(left):
            for j, w in enumerate(anchors):
                assert big.has_edge(i, j) == g.has_edge(u, w)

    def test_row_popcount_is_anchor_neighbour_count(self):
        g = er_graph(20, 0.4, 5)
        anchors = [3, 8, 15, 19]
        left = [v for v in range(20) if v not in anchors]
        big = induced_bigraph(g, left, anchors)
        dense = big.dense()
        for i, u in enumerate(left):
            assert dense[i].sum() == len(set(g.neighbors(u)) & set(anchors))

    def test_rejects_overlap_and_duplicates(self):
        g = path_graph(4)
        with pytest.raises(ValueError, match="disjoint"):
            induced_bigraph(g, [0, 1], [1, 2])
        with pytest.raises(ValueError, match="duplicate"):
            induced_bigraph(g, [0], [1, 1])


class TestEdgeListIO:
    def test_read_simple_path(self):
        g = read_edge_list(io.StringIO("a b\nb c"))
        assert g.n == 3 and g.num_edges == 2
        assert g.labels == ("a", "b", "c")
        assert g.has_edge(0, 1) and g.has_edge(1, 2) and not g.has_edge(0, 2)

    def test_read_deduplicates(self):
        g = read_edge_list(io.StringIO("a b\na b"))
        assert g.n == 2 and g.num_edges == 1

    def test_read_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            read_edge_list(io.StringIO("x x"))

    def test_read_rejects_malformed_line(self):
        with pytest.raises(ValueError, match="two tokens"):
            read_edge_list(io.StringIO("a b c"))

    def test_read_rejects_empty(self):
        with pytest.raises(ValueError, match="empty"):
            read_edge_list(io.StringIO("# only a comment\n\n"))

    def test_read_skips_comments_and_blanks(self):
        g = read_edge_list(io.StringIO("# header\n\na b\n  \nb c\n"))
        assert g.n == 3

    def test_write_triangle_golden(self):
        assert edge_list_text(Graph.complete(3)) == "0 1\n0 2\n1 2\n"

    def test_write_edgeless_empty_body(self):
        assert edge_list_text(Graph.empty(4)) == ""

    def test_round_trip(self, tmp_path):
        g = er_graph(20, 0.4, 1)
        assert g.degrees.min() > 0  # isolated vertices are not representable
        path = tmp_path / "g.el"
        write_edge_list(g, path)
        g2 = read_edge_list(path)
        assert g2.n == g.n
        # g2 ids follow first appearance; labels carry the original ids
        back = [int(lbl) for lbl in g2.labels]
        for i in range(g.n):
            for j in range(i + 1, g.n):
                assert g2.has_edge(i, j) == g.has_edge(back[i], back[j])
        # and writing the round-tripped graph after relabeling is bit-identical
        order = np.argsort(back)
        dense = g2.dense()[np.ix_(order, order)]
        assert edge_list_text(Graph(dense)) == edge_list_text(g)
