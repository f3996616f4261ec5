"""Left Perron vectors and the resolvent map ``x -> x^T X(lam)``.

``X(lam) = (1 - lam) (I - lam P)^{-1}`` is never formed. Row-vector
products with it are computed by fixed-point iteration on
``y^T = lam y^T P + (1 - lam) x^T`` or by a truncated Neumann series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError, PreconditionError
from .graph import Graph, RowStochastic, check_distribution, degrees, row_normalize
from .structure import is_eulerian_balanced, is_strongly_connected

PERRON_DAMPING = 0.5
DIRECT_SOLVE = "direct_solve"
NEUMANN_SERIES = "neumann_series"


@dataclass(frozen=True)
class PerronResult:
    vector: np.ndarray
    residual: float
    iterations: int

    def to_dict(self) -> dict:
        return {
            "vector": [float(x) for x in self.vector],
            "residual": float(self.residual),
            "iterations": int(self.iterations),
        }


@dataclass(frozen=True)
class ResolventConfig:
    lam: float = 0.85
    method: str = DIRECT_SOLVE
    tolerance: float = 1e-13
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise InputError("lambda must be in (0,1)")
        if self.method not in (DIRECT_SOLVE, NEUMANN_SERIES):
            raise InputError(f"unknown resolvent method {self.method!r}")
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if self.max_terms < 1:
            raise InputError("max_terms must be at least 1")


def iteration_bound(lam: float, tol: float) -> int:
    """A-priori number of Jacobi sweeps, ``log(tol (1-lam)) / log(lam)``."""
    return max(1, math.ceil(math.log(tol * (1.0 - lam)) / math.log(lam)))


def resolvent_product(x, P: RowStochastic, lam: float, tol: float = 1e-13,
                      method: str = DIRECT_SOLVE, max_terms: int = 1_000_000) -> np.ndarray:
    """``x^T X(lam)`` for an arbitrary real vector ``x`` (no simplex checks).

    The result ``y`` satisfies ``||y^T (I - lam P) - (1 - lam) x^T||_1 <= tol ||x||_1``.
    """
    if P.has_dangling:
        raise PreconditionError("resolvent requires a matrix without dangling rows")
    x = np.asarray(x, dtype=float)
    scale = float(np.abs(x).sum())
    if scale == 0.0:
        return np.zeros_like(x)
    base = (1.0 - lam) * x
    bound = iteration_bound(lam, tol)
    if method == NEUMANN_SERIES:
        term = base
        acc = base.copy()
        k = 0
        while lam ** (k + 1) > tol:
            if k >= max_terms:
                raise ConvergenceError("Neumann series exceeded max_terms", best=acc)
            term = lam * P.left_multiply(term)
            acc += term
            k += 1
        return acc
    y = x.copy()
    stop = tol * (1.0 - lam) * scale
    for k in range(min(bound, max_terms)):
        y_next = lam * P.left_multiply(y) + base
        diff = float(np.abs(y_next - y).sum())
        y = y_next
        if diff <= stop:
            break
    else:
        if max_terms < bound:
            raise ConvergenceError("resolvent iteration exceeded max_terms", best=y,
                                   residual=diff, iterations=max_terms)
    return y


def apply_resolvent(x, P: RowStochastic, cfg: ResolventConfig = ResolventConfig()) -> np.ndarray:
    """Map a probability vector through ``X(lam)``; the result is again one."""
    x = check_distribution(x, P.n, name="x")
    return resolvent_product(x, P, cfg.lam, cfg.tolerance, cfg.method, cfg.max_terms)


def left_perron(block: RowStochastic, tol: float = 1e-12, max_iter: int = 100_000,
                check: bool = True) -> PerronResult:
    """Left Perron vector of an irreducible row-stochastic matrix.

    Runs power iteration on ``X(0.5)``, which is positive and shares its
    Perron vector with ``P``, so periodic matrices are handled too. Stops
    once ``||c^T P - c^T||_1 <= tol``.
    """
    if block.has_dangling:
        raise PreconditionError("Perron vector needs a block without dangling rows")
    if check and not is_strongly_connected(block.as_graph()):
        raise PreconditionError("Perron vector needs an irreducible block")
    n = block.n
    x = np.full(n, 1.0 / n)
    inner_tol = max(tol * 1e-3, 1e-16)
    residual = float(np.abs(block.left_multiply(x) - x).sum())
    it = 0
    while residual > tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"Perron iteration did not reach tol={tol:g} in {max_iter} iterations",
                best=x / x.sum(), residual=residual, iterations=it,
            )
        x = resolvent_product(x, block, PERRON_DAMPING, inner_tol)
        x /= x.sum()
        it += 1
        residual = float(np.abs(block.left_multiply(x) - x).sum())
    return PerronResult(x, residual, it)


def degree_perron_undirected(g: Graph) -> np.ndarray:
    """``k(i) / sum_j k(j)`` for a connected undirected (symmetric) graph."""
    deg = degrees(g)
    if deg.undirected_degree is None:
        raise PreconditionError("graph is not symmetric")
    if not is_strongly_connected(g):
        raise PreconditionError("graph is not connected")
    return deg.undirected_degree / deg.undirected_degree.sum()


def degree_perron_eulerian(g: Graph) -> np.ndarray | None:
    """Normalized out-degrees if in/out degrees balance, else ``None``."""
    if not is_strongly_connected(g):
        raise PreconditionError("graph is not strongly connected")
    if not is_eulerian_balanced(g):
        return None
    out = degrees(g).out_degree
    return out / out.sum()


def block_perron(g: Graph, nodes, tol: float = 1e-12, max_iter: int = 100_000) -> PerronResult:
    """Perron vector of the row normalization of the subgraph on ``nodes``."""
    return left_perron(row_normalize(g.subgraph(nodes)), tol, max_iter)
