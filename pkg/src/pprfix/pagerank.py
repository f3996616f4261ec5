"""The PageRank operator, its feedback iteration and its fixed points.

``PR_lam(v) = v^T X(lam)`` maps the probability simplex to itself. Feeding
the output back in as the next personalization vector converges to a
convex combination of the dangling-cluster Perron vectors; the weights
are the absorption masses computed by :func:`predict_limit`.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import InputError, InvariantError, PreconditionError
from .graph import (
    Graph,
    RowStochastic,
    check_distribution,
    dangling_vector,
    resolve_dangling,
    row_normalize,
)
from .spectral import DIRECT_SOLVE, block_perron, resolvent_product
from .structure import NormalForm, decompose, normal_form, scc

TRACE_ENTRY_BUDGET = 10_000_000
MASS_SLACK = 1e-12


class BoundaryPersonalizationWarning(UserWarning):
    """Personalization vector has zero entries."""


@dataclass(frozen=True)
class PageRankConfig:
    """Parameters of ``PR_lam``.

    ``dangling_policy`` is ``"reject"``, ``"patch_uniform"`` or a
    probability vector ``u`` used to patch dangling rows. The resolvent
    tolerance defaults to a thousandth of ``tolerance``.
    """

    lam: float
    personalization: np.ndarray
    dangling_policy: object = "patch_uniform"
    tolerance: float = 1e-10
    max_iterations: int = 1_000_000
    resolvent_method: str = DIRECT_SOLVE
    resolvent_tolerance: float | None = None

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise InputError("lambda must be in (0,1)")
        v = check_distribution(self.personalization, name="personalization vector")
        object.__setattr__(self, "personalization", v)
        if not isinstance(self.dangling_policy, str):
            u = check_distribution(self.dangling_policy, v.size, name="dangling vector u")
            object.__setattr__(self, "dangling_policy", u)
        if self.tolerance < 0:
            raise InputError("tolerance must be nonnegative")
        if self.max_iterations < 0:
            raise InputError("max_iterations must be nonnegative")

    @property
    def inner_tolerance(self) -> float:
        if self.resolvent_tolerance is not None:
            return self.resolvent_tolerance
        return max(self.tolerance * 1e-3, 1e-15)

    def with_personalization(self, v) -> "PageRankConfig":
        return PageRankConfig(self.lam, v, self.dangling_policy, self.tolerance,
                              self.max_iterations, self.resolvent_method,
                              self.resolvent_tolerance)


@dataclass
class IterationTrace:
    """Record of a feedback run ``x_k^T = x_{k-1}^T X(lam)``.

    ``iterates`` holds every ``stride``-th vector when a stride was
    requested; ``residuals[k-1]`` is ``||x_k - x_{k-1}||_1``;
    ``cluster_mass[k]`` is the mass of ``x_k`` on each normal-form block.
    """

    limit: np.ndarray
    converged: bool
    iterations: int
    residuals: list[float]
    cluster_mass: np.ndarray
    normal_form: NormalForm
    iterates: list[np.ndarray] = field(default_factory=list)
    iterate_steps: list[int] = field(default_factory=list)
    stride: int | None = None
    iterates_truncated: bool = False

    def dangling_mass(self) -> np.ndarray:
        return self.cluster_mass[:, self.normal_form.L:]


@dataclass(frozen=True)
class FixedPointReport:
    L: int
    M: int
    exists_interior: bool
    exists_boundary: bool
    unique: bool
    vertices: list[np.ndarray]
    normal_form: NormalForm

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "M": self.M,
            "exists_interior": self.exists_interior,
            "exists_boundary": self.exists_boundary,
            "unique": self.unique,
            "vertices": [[float(x) for x in v] for v in self.vertices],
            "dangling_clusters": [[int(i) for i in b] for b in self.normal_form.dangling_blocks],
        }


def effective_matrix(P: RowStochastic, policy) -> RowStochastic:
    """``P`` with dangling rows patched per ``policy`` (or an error under reject)."""
    if not P.has_dangling:
        return P
    return P.patched(dangling_vector(P.n, policy))


def _pagerank(P: RowStochastic, cfg: PageRankConfig) -> np.ndarray:
    Pe = effective_matrix(P, cfg.dangling_policy)
    if cfg.personalization.size != P.n:
        raise InputError(f"personalization has length {cfg.personalization.size}, expected {P.n}")
    return resolvent_product(cfg.personalization, Pe, cfg.lam, cfg.inner_tolerance,
                             cfg.resolvent_method)


def pagerank(P: RowStochastic, cfg: PageRankConfig) -> np.ndarray:
    """PageRank vector ``(1 - lam) v^T (I - lam P)^{-1}``."""
    if np.any(cfg.personalization <= 0):
        warnings.warn("personalization vector is not strictly positive",
                      BoundaryPersonalizationWarning, stacklevel=2)
    return _pagerank(P, cfg)


def feedback_iterate(P: RowStochastic, cfg: PageRankConfig, trace_stride: int | None = None,
                     nf: NormalForm | None = None) -> IterationTrace:
    """Iterate ``x_k = PR_lam(x_{k-1})`` from ``x_0 = v`` until the step is small.

    Stops when ``||x_k - x_{k-1}||_1 <= cfg.tolerance`` or after
    ``cfg.max_iterations`` steps; non-convergence is reported in the trace.
    """
    Pe = effective_matrix(P, cfg.dangling_policy)
    x = cfg.personalization
    if x.size != P.n:
        raise InputError(f"personalization has length {x.size}, expected {P.n}")
    if nf is None:
        nf = decompose(Pe.as_graph())
    block = nf.block_index()
    nblocks = len(nf.blocks)

    def masses(y):
        return np.bincount(block, weights=y, minlength=nblocks)

    store = trace_stride is not None and trace_stride >= 1
    budget = TRACE_ENTRY_BUDGET
    iterates, steps = [], []
    truncated = False
    if store:
        iterates.append(x.copy())
        steps.append(0)
        budget -= x.size
    residuals: list[float] = []
    mass = [masses(x)]
    converged = False
    k = 0
    while k < cfg.max_iterations:
        y = resolvent_product(x, Pe, cfg.lam, cfg.inner_tolerance, cfg.resolvent_method)
        k += 1
        diff = float(np.abs(y - x).sum())
        residuals.append(diff)
        mass.append(masses(y))
        x = y
        if store and k % trace_stride == 0:
            if budget >= x.size:
                iterates.append(x.copy())
                steps.append(k)
                budget -= x.size
            else:
                truncated = True
        if diff <= cfg.tolerance:
            converged = True
            break
    if store and steps[-1] != k and budget >= x.size:
        iterates.append(x.copy())
        steps.append(k)
    return IterationTrace(
        limit=x,
        converged=converged,
        iterations=k,
        residuals=residuals,
        cluster_mass=np.array(mass),
        normal_form=nf,
        iterates=iterates,
        iterate_steps=steps,
        stride=trace_stride if store else None,
        iterates_truncated=truncated,
    )


def absorption_masses(P: RowStochastic, nf: NormalForm, v, lam: float) -> np.ndarray:
    """Mass ``alpha_j`` that the feedback iteration finally holds in dangling block j.

    With ``T`` and ``R_j`` the transient-to-transient and transient-to-block-j
    blocks of ``X(lam)``, ``alpha_j = ||v_j||_1 + v_T^T (I - T)^{-1} R_j e``.
    From the block inverse, ``T = (1-lam) W`` and ``R_j e = lam W P_{T,j} e``
    where ``W = (I - lam P_TT)^{-1}``.
    """
    v = np.asarray(v, dtype=float)
    alpha = np.array([v[b].sum() for b in nf.dangling_blocks])
    trans = nf.transient_nodes
    nt = trans.size
    if nt == 0:
        return alpha
    v_t = v[trans]
    if not np.any(v_t):
        return alpha
    m = P.matrix.tocsr()
    p_tt = m[trans][:, trans].tocsc()
    lu = spla.splu((sp.identity(nt, format="csc") - lam * p_tt).tocsc())

    # (I - T)^T y = v_T, with T^T z = (1 - lam) W^T z
    def matvec(z):
        z = np.asarray(z, dtype=float).ravel()
        return z - (1.0 - lam) * lu.solve(z, trans="T")

    op = spla.LinearOperator((nt, nt), matvec=matvec, dtype=float)
    y, info = spla.gmres(op, v_t, rtol=1e-14, atol=0.0, restart=min(nt, 200), maxiter=1000)
    res = float(np.abs(matvec(y) - v_t).sum())
    if info < 0 or res > 1e-10 * max(1.0, float(np.abs(v_t).sum())):
        raise InvariantError(f"transient absorption system unsolved (residual {res:.3g})")
    rows = m[trans]
    for j, b in enumerate(nf.dangling_blocks):
        b_j = np.asarray(rows[:, b].sum(axis=1)).ravel()
        r_j = lam * lu.solve(b_j)
        alpha[j] += float(y @ r_j)
    return alpha


def lift(vec, nodes, n: int) -> np.ndarray:
    out = np.zeros(n)
    out[np.asarray(nodes)] = vec
    return out


def dangling_perron_vectors(P: RowStochastic, nf: NormalForm, tol: float = 1e-12) -> list[np.ndarray]:
    """Perron vector of each dangling block, zero-padded to length N."""
    g = P.as_graph()
    return [lift(block_perron(g, b, tol).vector, b, P.n) for b in nf.dangling_blocks]


def predict_limit(P: RowStochastic, nf: NormalForm, v, lam: float,
                  perron_tol: float = 1e-12) -> np.ndarray:
    """Closed-form limit of the feedback iteration, without iterating.

    Zero on non-dangling blocks, ``alpha_j c_j`` on dangling block j.
    """
    if P.has_dangling:
        raise PreconditionError("predict_limit requires a matrix without dangling rows")
    if not 0.0 < lam < 1.0:
        raise InputError("lambda must be in (0,1)")
    v = check_distribution(v, P.n, name="personalization vector")
    alpha = absorption_masses(P, nf, v, lam)
    if abs(alpha.sum() - 1.0) > 1e-9 or np.any(alpha < -1e-12):
        raise InvariantError(f"absorption masses do not form a distribution: {alpha}")
    out = np.zeros(P.n)
    for a, c in zip(alpha, dangling_perron_vectors(P, nf, perron_tol)):
        out += a * c
    return out


def fixed_point_distance(P: RowStochastic, cfg: PageRankConfig) -> float:
    """``||PR_lam(v) - v||_1`` for the candidate ``v = cfg.personalization``."""
    return float(np.abs(_pagerank(P, cfg) - cfg.personalization).sum())


def is_fixed_point(P: RowStochastic, cfg: PageRankConfig, tol: float = 1e-8) -> bool:
    return fixed_point_distance(P, cfg) <= tol


def classify_fixed_points(g: Graph, lam: float, dangling_policy="patch_uniform",
                          tol: float = 1e-8) -> FixedPointReport:
    """Existence and uniqueness of fixed points of ``PR_lam`` on ``g``.

    Dangling nodes are first patched per ``dangling_policy``. The fixed
    point set is the convex hull of the dangling-cluster Perron vectors; an
    interior fixed point exists iff every cluster is dangling.
    """
    if not 0.0 < lam < 1.0:
        raise InputError("lambda must be in (0,1)")
    ge = resolve_dangling(g, dangling_policy)
    nf = normal_form(scc(ge), ge)
    P = row_normalize(ge)
    vertices = dangling_perron_vectors(P, nf)
    for c in vertices:
        cfg = PageRankConfig(lam, c, "reject", tolerance=tol)
        d = fixed_point_distance(P, cfg)
        if d > tol:
            raise InvariantError(f"dangling-cluster Perron vector is not fixed (distance {d:.3g})")
    return FixedPointReport(
        L=nf.L,
        M=nf.M,
        exists_interior=nf.L == 0,
        exists_boundary=nf.M >= 1,
        unique=nf.M == 1,
        vertices=vertices,
        normal_form=nf,
    )
