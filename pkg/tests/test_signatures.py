import math

import numpy as np
import pytest

from gralign import (
    Graph,
    ProbVector,
    Signature,
    SignatureTable,
    consistent_bipartite_align,
    hamming,
    induced_bigraph,
    misalignment_bound,
    misalignment_frequency,
    naive_bipartite_align,
    sample_correlated_er,
    signatures_of,
    top_h,
)
from gralign._bitops import pack_rows
from gralign.signatures import consistent_pairs


def er_graph(n, p_edge, seed):
    return sample_correlated_er(n, ProbVector.from_edge_prob(p_edge), seed).ga


def table_from_bools(dense, index=None, n=None):
    dense = np.asarray(dense, dtype=bool)
    index = np.arange(dense.shape[0]) if index is None else np.asarray(index)
    return SignatureTable(pack_rows(dense), index, dense.shape[1], n or dense.shape[0])


def sig(bits_text):
    return Signature.from_bools([c == "1" for c in bits_text])


class TestSignaturesOf:
    def test_isolated_vertex_zero_signature(self):
        g = Graph.from_edges(5, [0, 0], [1, 2])  # vertex 4 isolated
        table = signatures_of(g, top_h(g, 2))
        row = table.row(list(table.index).index(4))
        assert row.popcount() == 0

    def test_hub_all_ones(self):
        # vertex 0 adjacent to everything; anchors are the next two hubs
        us = [0] * 5 + [1] * 3 + [2] * 2
        vs = [1, 2, 3, 4, 5, 2, 3, 4, 3, 4]
        g = Graph.from_edges(6, us, vs)
        anchors = top_h(g, 2)
        assert 0 in anchors.ordered
        table = signatures_of(g, anchors)
        assert table.row(0).popcount() == 2  # vertex 2 sees both anchors
        for i, v in enumerate(table.index):
            expected = sum(g.has_edge(v, w) for w in anchors.ordered)
            assert table.row(i).popcount() == expected

    def test_matches_direct_lookup(self):
        g = er_graph(30, 0.4, 5)
        anchors = top_h(g, 4)
        table = signatures_of(g, anchors)
        for i, v in enumerate(table.index):
            bits = table.row(i).to_bools()
            for j, w in enumerate(anchors.ordered):
                assert bits[j] == g.has_edge(v, int(w))

    def test_equals_induced_bigraph_rows(self):
        g = er_graph(25, 0.35, 6)
        anchors = top_h(g, 5)
        table = signatures_of(g, anchors)
        rest = np.setdiff1d(np.arange(25), anchors.ordered)
        big = induced_bigraph(g, rest, anchors.ordered)
        assert np.array_equal(table.rows, big.rows)
        assert np.array_equal(table.index, rest)

    def test_popcount_equals_anchor_neighbour_count(self):
        g = er_graph(40, 0.3, 7)
        anchors = top_h(g, 6)
        table = signatures_of(g, anchors)
        aset = set(anchors.ordered.tolist())
        for i, v in enumerate(table.index):
            assert table.row(i).popcount() == len(set(g.neighbors(int(v))) & aset)


class TestHamming:
    def test_example(self):
        assert hamming(sig("0101"), sig("0011")) == 2

    def test_identity(self):
        s = sig("100110")
        assert hamming(s, s) == 0

    def test_matches_bit_loop(self):
        rng = np.random.Generator(np.random.PCG64(2))
        a = rng.random(256) < 0.5
        b = rng.random(256) < 0.5
        expected = sum(1 for x, y in zip(a, b) if x != y)
        assert hamming(Signature.from_bools(a), Signature.from_bools(b)) == expected

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            hamming(sig("01"), sig("011"))

    @pytest.mark.parametrize("seed", range(10))
    def test_metric_properties(self, seed):
        rng = np.random.Generator(np.random.PCG64((3, seed)))
        a, b, c = (Signature.from_bools(rng.random(96) < 0.5) for _ in range(3))
        assert hamming(a, b) == hamming(b, a)
        assert hamming(a, c) <= hamming(a, b) + hamming(b, c)
        assert (hamming(a, b) == 0) == (a == b)


class TestNaiveBipartiteAlign:
    def test_identical_distinct_tables_identity(self):
        dense = np.eye(6, dtype=bool)  # six distinct rows
        ta = table_from_bools(dense)
        tb = table_from_bools(dense)
        m = naive_bipartite_align(ta, tb)
        assert m.map.tolist() == list(range(6))

    def test_single_row_each(self):
        ta = table_from_bools([[True, False]], index=[3], n=5)
        tb = table_from_bools([[False, False]], index=[1], n=5)
        m = naive_bipartite_align(ta, tb)
        assert m.map[1] == 3 and m.matched_count == 1

    @pytest.mark.parametrize("seed", [4, 14, 24])
    def test_matches_exhaustive_argmin(self, seed):
        rng = np.random.Generator(np.random.PCG64(seed))
        da = rng.random((6, 8)) < 0.5
        db = rng.random((6, 8)) < 0.5
        m = naive_bipartite_align(table_from_bools(da), table_from_bools(db))
        for v in range(6):
            dists = [sum(1 for k in range(8) if da[u, k] != db[v, k]) for u in range(6)]
            best = min(range(6), key=lambda u: (dists[u], u))
            assert m.map[v] == best

    def test_tie_goes_to_lowest_id(self):
        da = np.array([[True, False], [True, False], [False, True]])
        db = np.array([[True, False]])
        ta = table_from_bools(da, index=[2, 5, 7], n=8)
        tb = table_from_bools(db, index=[0], n=8)
        tb2 = table_from_bools(np.vstack([db, db, db]), index=[0, 1, 2], n=8)
        with pytest.raises(ValueError):
            naive_bipartite_align(ta, tb)  # row-count mismatch
        m = naive_bipartite_align(ta, tb2)
        assert m.map[0] == 2  # rows 2 and 5 tie at distance zero

    def test_may_be_non_injective(self):
        da = np.array([[True, False], [False, True]])
        db = np.array([[True, False], [True, False]])
        m = naive_bipartite_align(table_from_bools(da), table_from_bools(db))
        assert m.map.tolist() == [0, 0]
        assert not m.is_injective()

    @pytest.mark.parametrize("seed", range(5))
    def test_commutes_with_shared_column_permutation(self, seed):
        rng = np.random.Generator(np.random.PCG64((5, seed)))
        da = rng.random((10, 12)) < 0.4
        db = rng.random((10, 12)) < 0.4
        perm = rng.permutation(12)
        base = naive_bipartite_align(table_from_bools(da), table_from_bools(db))
        permuted = naive_bipartite_align(
            table_from_bools(da[:, perm]), table_from_bools(db[:, perm])
        )
        assert base == permuted


class TestConsistentBipartiteAlign:
    def test_identical_distinct_tables_total_identity(self):
        dense = np.tril(np.ones((5, 5), dtype=bool))
        m = consistent_bipartite_align(table_from_bools(dense), table_from_bools(dense))
        assert m.map.tolist() == list(range(5))

    def test_equidistant_rivals_veto(self):
        # two tb rows tie at distance 1 from ta row 0; it must stay unmatched
        da = np.array([[False, False, False, False], [True, True, True, True], [True, True, False, False]])
        db = np.array([[True, False, False, False], [False, True, False, False], [True, True, True, False]])
        m = consistent_bipartite_align(table_from_bools(da), table_from_bools(db))
        assert 0 not in m.map.tolist()

    @pytest.mark.parametrize("seed", [6, 16, 26, 36])
    def test_matches_brute_force_conditions(self, seed):
        rng = np.random.Generator(np.random.PCG64(seed))
        da = rng.random((8, 10)) < 0.5
        db = rng.random((8, 10)) < 0.5

        def dist(u, v):
            return sum(1 for k in range(10) if da[u, k] != db[v, k])

        mu_ab = [min(range(8), key=lambda v: (dist(u, v), v)) for u in range(8)]
        mu_ba = [min(range(8), key=lambda u: (dist(u, v), u)) for v in range(8)]
        expected = {}
        for u in range(8):
            for v in range(8):
                cond1 = all(mu_ab[u2] != v for u2 in range(8) if u2 != u)
                cond2 = all(mu_ba[v2] != u for v2 in range(8) if v2 != v)
                cond3 = mu_ab[u] == v or mu_ba[v] == u
                if cond1 and cond2 and cond3:
                    expected[v] = u
        m = consistent_bipartite_align(table_from_bools(da), table_from_bools(db))
        actual = {v: int(m.map[v]) for v in range(8) if m.map[v] != -1}
        assert actual == expected

    @pytest.mark.parametrize("seed", range(8))
    def test_always_injective(self, seed):
        rng = np.random.Generator(np.random.PCG64((7, seed)))
        da = rng.random((12, 6)) < 0.5
        db = rng.random((12, 6)) < 0.5
        m = consistent_bipartite_align(table_from_bools(da), table_from_bools(db))
        assert m.is_injective()

    def test_subset_of_naive_argmin_pairs(self):
        rng = np.random.Generator(np.random.PCG64(8))
        da = rng.random((10, 8)) < 0.5
        db = rng.random((10, 8)) < 0.5
        ta, tb = table_from_bools(da), table_from_bools(db)
        cons = consistent_bipartite_align(ta, tb)
        mu_ba = naive_bipartite_align(ta, tb)
        mu_ab = naive_bipartite_align(tb, ta)  # reversed direction
        for v in range(10):
            u = cons.map[v]
            if u != -1:
                assert mu_ba.map[v] == u or mu_ab.map[u] == v


class TestMisalignmentRate:
    @pytest.mark.parametrize("h", [32, 64])
    def test_bounded_by_exponential_rate(self, h):
        p = ProbVector(0.3, 0.05, 0.05, 0.6)
        trials = 2 * 10**4
        freq = misalignment_frequency(p, h, trials, (9, h))
        bound = misalignment_bound(p, h)
        se = math.sqrt(bound * (1 - bound) / trials)
        assert freq <= bound + 3 * se

    def test_chunking_is_invisible(self):
        p = ProbVector(0.2, 0.02, 0.02, 0.76)
        a = misalignment_frequency(p, 16, 5000, 99, chunk=512)
        b = misalignment_frequency(p, 16, 5000, 99, chunk=5000)
        assert a == b


class TestConsistentPairsKernel:
    def test_empty_inputs(self):
        empty = np.zeros((0, 1), dtype=np.uint64)
        ia, ib = consistent_pairs(empty, empty)
        assert ia.size == 0 and ib.size == 0
