import warnings

import numpy as np
import pytest

from conftest import make
from pprfix import generators as gen
from pprfix.errors import InputError, PreconditionError
from pprfix.graph import resolve_dangling, row_normalize
from pprfix.oracle import dense_absorption, dense_power_limit, dense_resolvent
from pprfix.pagerank import (
    BoundaryPersonalizationWarning,
    PageRankConfig,
    absorption_masses,
    classify_fixed_points,
    feedback_iterate,
    is_fixed_point,
    pagerank,
    predict_limit,
)
from pprfix.spectral import block_perron, left_perron
from pprfix.structure import decompose


class TestPageRank:
    def test_two_cycle(self, two_cycle):
        with pytest.warns(BoundaryPersonalizationWarning):
            pi = pagerank(row_normalize(two_cycle), PageRankConfig(0.85, [1.0, 0.0]))
        np.testing.assert_allclose(pi, [0.5405405405405405, 0.4594594594594595], atol=1e-10)

    def test_perron_vector_is_fixed(self, rng):
        P = row_normalize(gen.strongly_connected(rng, 15))
        c = left_perron(P).vector
        np.testing.assert_allclose(pagerank(P, PageRankConfig(0.3, c)), c, atol=1e-10)

    def test_single_self_loop(self):
        for lam in (0.1, 0.5, 0.9):
            assert pagerank(row_normalize(make(1, [(0, 0)])), PageRankConfig(lam, [1.0])) == [1.0]

    def test_reject_policy(self):
        P = row_normalize(make(3, [(0, 1), (1, 0), (1, 2)]))
        with pytest.raises(PreconditionError):
            pagerank(P, PageRankConfig(0.85, np.full(3, 1 / 3), "reject"))

    def test_patch_matches_google_matrix(self, rng):
        # dense Google matrix lam (P + d u^T) + (1 - lam) e v^T, stationary vector
        g = make(4, [(0, 1), (1, 2), (2, 0), (0, 3)])
        v = gen.random_distribution(rng, 4)
        u = gen.random_distribution(rng, 4)
        lam = 0.85
        P = row_normalize(g)
        G = lam * (P.dense() + np.outer(P.dangling, u)) + (1 - lam) * np.outer(np.ones(4), v)
        w, vecs = np.linalg.eig(G.T)
        pi = np.real(vecs[:, np.argmin(np.abs(w - 1))])
        pi /= pi.sum()
        np.testing.assert_allclose(pagerank(P, PageRankConfig(lam, v, u)), pi, atol=1e-10)

    def test_no_warning_for_positive_v(self, two_cycle):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            pagerank(row_normalize(two_cycle), PageRankConfig(0.5, [0.5, 0.5]))

    def test_bad_personalization(self, two_cycle):
        with pytest.raises(InputError):
            PageRankConfig(0.5, [0.5, 0.6])
        with pytest.raises(InputError):
            PageRankConfig(1.2, [0.5, 0.5])


class TestFeedbackIterate:
    def test_three_cycle(self, three_cycle, rng):
        v = gen.random_distribution(rng, 3)
        tr = feedback_iterate(row_normalize(three_cycle), PageRankConfig(0.5, v, tolerance=1e-13))
        assert tr.converged
        np.testing.assert_allclose(tr.limit, np.full(3, 1 / 3), atol=1e-12)

    def test_cluster_into_dangling(self, cluster_into_dangling):
        P = row_normalize(cluster_into_dangling)
        tr = feedback_iterate(P, PageRankConfig(0.85, np.full(4, 0.25), tolerance=1e-13))
        np.testing.assert_allclose(tr.limit, [0, 0, 0.5, 0.5], atol=1e-10)
        X = dense_resolvent(P.dense(), 0.85)
        np.testing.assert_allclose(tr.limit, dense_power_limit(X, np.full(4, 0.25), 400),
                                   atol=1e-10)

    def test_diagonal_case_is_immediately_fixed(self, two_disjoint_cycles):
        v = np.array([0.3, 0.3, 0.2, 0.2])
        tr = feedback_iterate(row_normalize(two_disjoint_cycles), PageRankConfig(0.5, v),
                              trace_stride=1)
        np.testing.assert_allclose(tr.iterates[1], tr.iterates[0], atol=1e-14)
        np.testing.assert_allclose(tr.limit, v, atol=1e-14)

    def test_matches_dense_power(self, rng):
        for _ in range(10):
            g, _, _ = gen.reducible(rng, rng.integers(1, 4, size=2), rng.integers(1, 4, size=2))
            P = row_normalize(g)
            v = gen.random_distribution(rng, g.node_count)
            cfg = PageRankConfig(0.6, v, tolerance=0.0, max_iterations=12)
            tr = feedback_iterate(P, cfg, trace_stride=3)
            X = dense_resolvent(P.dense(), 0.6)
            for k, x in zip(tr.iterate_steps, tr.iterates):
                np.testing.assert_allclose(x, dense_power_limit(X, v, k), atol=1e-11)
            assert tr.iterate_steps == [0, 3, 6, 9, 12]
            assert not tr.converged

    def test_non_convergence_is_reported(self, rng):
        # near-reducible: tiny bridge between two cycles
        g = make(4, [(0, 1), (1, 0), (2, 3), (3, 2), (0, 2, 1e-9), (2, 0, 1e-9)])
        tr = feedback_iterate(row_normalize(g),
                              PageRankConfig(0.85, [0.7, 0.1, 0.1, 0.1], max_iterations=5))
        assert not tr.converged and tr.iterations == 5

    def test_iterates_sum_to_one(self, rng):
        g, _, _ = gen.reducible(rng, [3, 1, 2], [4, 2])
        tr = feedback_iterate(row_normalize(g),
                              PageRankConfig(0.85, gen.random_distribution(rng, g.node_count)),
                              trace_stride=1)
        for x in tr.iterates:
            assert abs(x.sum() - 1) <= 1e-10
        assert np.all(np.diff(tr.dangling_mass(), axis=0) >= -1e-12)

    def test_dangling_nodes_are_patched(self):
        g = make(3, [(0, 1), (1, 0), (1, 2)])
        tr = feedback_iterate(row_normalize(g), PageRankConfig(0.85, np.full(3, 1 / 3),
                                                               tolerance=1e-13))
        P = row_normalize(resolve_dangling(g))
        np.testing.assert_allclose(tr.limit, left_perron(P).vector, atol=1e-9)


class TestPredictLimit:
    def test_diagonal(self, two_disjoint_cycles):
        v = np.array([0.3, 0.3, 0.2, 0.2])
        P = row_normalize(two_disjoint_cycles)
        np.testing.assert_allclose(predict_limit(P, decompose(two_disjoint_cycles), v, 0.5), v,
                                   atol=1e-12)

    def test_zero_block(self, source_into_cycle):
        P = row_normalize(source_into_cycle)
        pl = predict_limit(P, decompose(source_into_cycle), [1.0, 0, 0], 0.5)
        np.testing.assert_allclose(pl, [0, 0.5, 0.5], atol=1e-12)
        tr = feedback_iterate(P, PageRankConfig(0.5, [1.0, 0, 0], tolerance=1e-13))
        np.testing.assert_allclose(tr.limit, pl, atol=1e-10)

    def test_strongly_connected(self, rng):
        g = gen.strongly_connected(rng, 10)
        P = row_normalize(g)
        pl = predict_limit(P, decompose(g), gen.random_distribution(rng, 10), 0.85)
        np.testing.assert_allclose(pl, left_perron(P).vector, atol=1e-12)

    def test_absorption_matches_undamped_walk(self, rng):
        # the X(lam) route must agree with the lam-free random-walk absorption
        for _ in range(20):
            L, M = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            g, _, _ = gen.reducible(rng, rng.integers(1, 5, size=L), rng.integers(1, 5, size=M))
            P = row_normalize(g)
            nf = decompose(g)
            v = gen.random_distribution(rng, g.node_count)
            B = dense_absorption(P.dense(), nf.transient_nodes, nf.dangling_blocks)
            expected = np.array([v[b].sum() for b in nf.dangling_blocks])
            expected += v[nf.transient_nodes] @ B
            for lam in (0.15, 0.5, 0.85):
                np.testing.assert_allclose(absorption_masses(P, nf, v, lam), expected, atol=1e-11)

    def test_rejects_dangling_rows(self):
        P = row_normalize(make(2, [(0, 1)]))
        with pytest.raises(PreconditionError):
            predict_limit(P, decompose(make(2, [(0, 1)])), [0.5, 0.5], 0.5)


class TestClassify:
    def test_strongly_connected(self, rng):
        g = gen.strongly_connected(rng, 8)
        r = classify_fixed_points(g, 0.85)
        assert (r.L, r.M, r.exists_interior, r.exists_boundary, r.unique) == (0, 1, True, True, True)
        np.testing.assert_allclose(r.vertices[0], left_perron(row_normalize(g)).vector, atol=1e-12)

    def test_cluster_into_dangling(self, cluster_into_dangling):
        r = classify_fixed_points(cluster_into_dangling, 0.85)
        assert (r.L, r.M, r.exists_interior, r.exists_boundary, r.unique) == (1, 1, False, True, True)
        np.testing.assert_allclose(r.vertices[0], [0, 0, 0.5, 0.5], atol=1e-12)

    def test_two_disjoint_cycles(self, two_disjoint_cycles):
        r = classify_fixed_points(two_disjoint_cycles, 0.85)
        assert (r.L, r.M, r.exists_interior, r.unique) == (0, 2, True, False)
        np.testing.assert_allclose(r.vertices, [[0.5, 0.5, 0, 0], [0, 0, 0.5, 0.5]], atol=1e-12)

    def test_reject_policy_with_dangling_node(self):
        with pytest.raises(PreconditionError):
            classify_fixed_points(make(2, [(0, 1)]), 0.5, "reject")

    def test_report_dict(self, two_disjoint_cycles):
        d = classify_fixed_points(two_disjoint_cycles, 0.5).to_dict()
        assert d["M"] == 2 and d["unique"] is False
        assert d["dangling_clusters"] == [[0, 1], [2, 3]]


class TestIsFixedPoint:
    def test_two_cycle(self, two_cycle):
        P = row_normalize(two_cycle)
        assert is_fixed_point(P, PageRankConfig(0.85, [0.5, 0.5]), 1e-8)
        assert not is_fixed_point(P, PageRankConfig(0.85, [0.9, 0.1]), 1e-8)

    def test_convex_combination(self, two_disjoint_cycles):
        P = row_normalize(two_disjoint_cycles)
        assert is_fixed_point(P, PageRankConfig(0.85, [0.45, 0.45, 0.05, 0.05]), 1e-8)

    def test_polytope(self, rng):
        for _ in range(15):
            L, M = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            g, _, _ = gen.reducible(rng, rng.integers(1, 4, size=L), rng.integers(1, 5, size=M))
            r = classify_fixed_points(g, 0.85)
            P = row_normalize(g)
            for _ in range(5):
                w = rng.dirichlet(np.ones(r.M))
                cand = sum(a * c for a, c in zip(w, r.vertices))
                assert is_fixed_point(P, PageRankConfig(0.85, cand), 1e-8)
                other = gen.random_distribution(rng, g.node_count)
                assert not is_fixed_point(P, PageRankConfig(0.85, other), 1e-8)


def test_zero_block_decay_exact(rng):
    for lam in (0.15, 0.5, 0.85):
        g = gen.single_source(rng, 6)
        v = gen.random_distribution(rng, g.node_count)
        tr = feedback_iterate(row_normalize(g), PageRankConfig(lam, v, tolerance=0.0,
                                                               max_iterations=50), trace_stride=1)
        for k, x in zip(tr.iterate_steps, tr.iterates):
            assert abs(x[0] - (1 - lam) ** k * v[0]) <= 1e-12


def test_personalization_independence(rng):
    for _ in range(5):
        g = gen.strongly_connected(rng, int(rng.integers(3, 20)))
        P = row_normalize(g)
        c = left_perron(P).vector
        for lam in (0.15, 0.5, 0.85):
            limits = [feedback_iterate(P, PageRankConfig(lam, gen.random_distribution(rng, g.node_count),
                                                         tolerance=1e-13)).limit
                      for _ in range(5)]
            for x in limits:
                assert np.abs(x - c).sum() <= 1e-8
                assert np.abs(x - limits[0]).sum() <= 1e-8


def test_diagonal_direction_matches_block_perron(rng):
    for _ in range(5):
        g, blocks = gen.block_diagonal(rng, rng.integers(2, 9, size=3))
        v = gen.random_distribution(rng, g.node_count)
        tr = feedback_iterate(row_normalize(g), PageRankConfig(0.85, v, tolerance=1e-13))
        for b in blocks:
            assert abs(tr.limit[b].sum() - v[b].sum()) <= 1e-10
            direction = tr.limit[b] / tr.limit[b].sum()
            assert np.abs(direction - block_perron(g, b).vector).sum() <= 1e-8
