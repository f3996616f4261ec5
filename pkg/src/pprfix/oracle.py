"""Dense brute-force references for validating the sparse iterative code.

Everything here works on small dense ``numpy`` arrays and shares no code
path with :mod:`pprfix.spectral` or :mod:`pprfix.pagerank`. Scale caps
keep each call well under a second.
"""
from __future__ import annotations

import numpy as np

from .errors import InvariantError, PreconditionError
from .graph import Graph

MAX_DENSE = 64
MAX_CLOSURE = 12


def dense_row_normalize(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    s = a.sum(axis=1, keepdims=True)
    return np.divide(a, s, out=np.zeros_like(a), where=s > 0)


def dense_resolvent(P: np.ndarray, lam: float) -> np.ndarray:
    """``(1 - lam) (I - lam P)^{-1}`` by LU with partial pivoting."""
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    if n > MAX_DENSE:
        raise PreconditionError(f"dense oracle limited to n <= {MAX_DENSE}")
    if not 0.0 < lam < 1.0:
        raise PreconditionError("lambda must be in (0,1)")
    m = np.eye(n) - lam * P
    if np.linalg.cond(m) > 1e12:
        raise InvariantError("I - lam P is numerically singular")
    return (1.0 - lam) * np.linalg.solve(m, np.eye(n))


def neumann_partial_sum(P: np.ndarray, lam: float, terms: int) -> np.ndarray:
    """``(1 - lam) sum_{i <= terms} (lam P)^i``."""
    P = np.asarray(P, dtype=float)
    term = np.eye(P.shape[0])
    acc = term.copy()
    for _ in range(terms):
        term = lam * term @ P
        acc += term
    return (1.0 - lam) * acc


def dense_power_limit(X: np.ndarray, v, k: int) -> np.ndarray:
    """``v^T X^k`` by ``k`` dense products."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] > MAX_DENSE:
        raise PreconditionError(f"dense oracle limited to n <= {MAX_DENSE}")
    x = np.asarray(v, dtype=float).copy()
    for _ in range(k):
        x = x @ X
    return x


def dense_perron(P: np.ndarray) -> np.ndarray:
    """Stationary vector from the linear system ``c^T (P - I) = 0, c^T e = 1``."""
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    a = np.vstack([(P - np.eye(n)).T, np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    c, *_ = np.linalg.lstsq(a, b, rcond=None)
    return c


def closure(g: Graph) -> np.ndarray:
    """Reflexive transitive closure by boolean Floyd-Warshall."""
    n = g.node_count
    if n > MAX_CLOSURE:
        raise PreconditionError(f"closure oracle limited to N <= {MAX_CLOSURE}")
    r = np.eye(n, dtype=bool)
    r[g.src, g.dst] = True
    for k in range(n):
        r |= np.outer(r[:, k], r[k, :])
    return r


def reachability_classes(g: Graph) -> list[frozenset[int]]:
    r = closure(g)
    mutual = r & r.T
    classes = []
    seen = set()
    for i in range(g.node_count):
        if i in seen:
            continue
        cls = frozenset(np.flatnonzero(mutual[i]).tolist())
        seen |= cls
        classes.append(cls)
    return classes


def reachability_sinks(g: Graph) -> list[frozenset[int]]:
    """Mutual-reachability classes with no arc leaving the class."""
    r = closure(g)
    sinks = []
    for cls in reachability_classes(g):
        members = sorted(cls)
        reach = np.flatnonzero(r[members].any(axis=0))
        if set(reach.tolist()) <= cls:
            sinks.append(cls)
    return sinks


def dense_absorption(P: np.ndarray, transient, sinks) -> np.ndarray:
    """Random-walk absorption probabilities ``(I - P_TT)^{-1} P_{T,j} e``.

    Returns an array of shape ``(len(transient), len(sinks))``. Uses the
    undamped walk, so it is independent of ``lam``.
    """
    P = np.asarray(P, dtype=float)
    t = np.asarray(transient, dtype=int)
    if t.size == 0:
        return np.zeros((0, len(sinks)))
    p_tt = P[np.ix_(t, t)]
    rhs = np.column_stack([P[np.ix_(t, sorted(s))].sum(axis=1) for s in sinks])
    return np.linalg.solve(np.eye(t.size) - p_tt, rhs)
