import numpy as np
import pytest

from conftest import make
from pprfix import generators as gen
from pprfix.errors import PreconditionError
from pprfix.graph import row_normalize
from pprfix.oracle import (
    dense_power_limit,
    dense_resolvent,
    neumann_partial_sum,
    reachability_sinks,
)


def test_two_cycle_resolvent():
    lam = 0.85
    X = dense_resolvent([[0, 1], [1, 0]], lam)
    expected = (1 - lam) / (1 - lam**2) * np.array([[1, lam], [lam, 1]])
    np.testing.assert_allclose(X, expected, atol=1e-15)
    np.testing.assert_allclose(X[0], [1 / 1.85, 0.85 / 1.85], atol=1e-15)


def test_identity_resolvent():
    np.testing.assert_allclose(dense_resolvent(np.eye(4), 0.3), np.eye(4), atol=1e-15)


def test_half_lambda_two_cycle():
    X = dense_resolvent([[0, 1], [1, 0]], 0.5)
    np.testing.assert_allclose(X, [[2 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-15)


def test_resolvent_rows_sum_to_one(rng):
    for _ in range(20):
        P = row_normalize(gen.strongly_connected(rng, int(rng.integers(2, 30)))).dense()
        for lam in (0.15, 0.5, 0.85, 0.99):
            np.testing.assert_allclose(dense_resolvent(P, lam).sum(axis=1), 1.0, atol=1e-10)


def test_resolvent_size_cap():
    with pytest.raises(PreconditionError):
        dense_resolvent(np.eye(65), 0.5)


def test_neumann_tail_bound(rng):
    for _ in range(10):
        P = row_normalize(gen.strongly_connected(rng, int(rng.integers(2, 15)))).dense()
        for lam in (0.15, 0.5, 0.85):
            X = dense_resolvent(P, lam)
            for K in (0, 3, 10, 40):
                err = np.abs(neumann_partial_sum(P, lam, K) - X).sum(axis=1).max()
                assert err <= lam ** (K + 1) + 1e-13


def test_power_limit_basics():
    X = dense_resolvent([[0, 1], [1, 0]], 0.5)
    v = np.array([1.0, 0.0])
    np.testing.assert_array_equal(dense_power_limit(X, v, 0), v)
    # antisymmetric part contracts by 1/3 per step
    np.testing.assert_allclose(dense_power_limit(X, v, 40), [0.5, 0.5], atol=1e-10)
    assert abs(dense_power_limit(X, [0.3, 0.7], 7).sum() - 1) <= 1e-10


def test_reachability_sinks_examples(two_cycle, cluster_into_dangling):
    assert reachability_sinks(two_cycle) == [frozenset({0, 1})]
    assert reachability_sinks(make(2, [(0, 1)])) == [frozenset({1})]
    assert reachability_sinks(cluster_into_dangling) == [frozenset({2, 3})]
