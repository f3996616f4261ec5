"""Weighted directed graphs, degree summaries and row normalization.

Node ids are 0-based integers everywhere. Parallel edges are merged by
summing their weights; edges whose merged weight is zero are dropped
because a zero entry of the adjacency matrix is not a link.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InputError, PreconditionError

SYMMETRY_TOL = 1e-12
DISTRIBUTION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted digraph on nodes ``0..node_count-1``.

    Edges are stored as three parallel arrays sorted by ``(src, dst)``
    with duplicates already merged.
    """

    node_count: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    _adjacency: sp.csr_matrix = field(repr=False, compare=False, default=None)

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[Sequence]) -> "Graph":
        """Build a graph from ``(src, dst)`` or ``(src, dst, weight)`` tuples."""
        if int(node_count) != node_count or node_count < 1:
            raise InputError(f"node_count must be a positive integer, got {node_count!r}")
        node_count = int(node_count)
        triples = []
        for e in edges:
            if len(e) == 2:
                s, d, w = e[0], e[1], 1.0
            elif len(e) == 3:
                s, d, w = e
            else:
                raise InputError(f"edge must have 2 or 3 fields, got {e!r}")
            triples.append((int(s), int(d), float(w)))
        if triples:
            arr = np.array(triples, dtype=float)
            src = arr[:, 0].astype(np.int64)
            dst = arr[:, 1].astype(np.int64)
            w = arr[:, 2]
        else:
            src = dst = np.zeros(0, dtype=np.int64)
            w = np.zeros(0)
        return cls._build(node_count, src, dst, w)

    @classmethod
    def _build(cls, n, src, dst, w) -> "Graph":
        if src.size:
            if src.min() < 0 or dst.min() < 0:
                raise InputError("node ids must be nonnegative")
            if max(src.max(), dst.max()) >= n:
                raise InputError(
                    f"node id {max(src.max(), dst.max())} out of range for {n} nodes"
                )
            if not np.all(np.isfinite(w)):
                raise InputError("edge weights must be finite")
            if np.any(w < 0):
                raise InputError("edge weights must be nonnegative")
        a = sp.coo_matrix((w, (src, dst)), shape=(n, n)).tocsr()
        a.sum_duplicates()
        a.eliminate_zeros()
        a.sort_indices()
        if a.nnz == 0 and n > 1:
            raise InputError("graph needs at least one edge with positive weight")
        coo = a.tocoo()
        g = cls(
            n,
            coo.row.astype(np.int64),
            coo.col.astype(np.int64),
            coo.data.astype(float),
        )
        object.__setattr__(g, "_adjacency", a)
        return g

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(s), int(d), float(w)) for s, d, w in zip(self.src, self.dst, self.weight)]

    @property
    def edge_count(self) -> int:
        return int(self.src.size)

    def adjacency(self) -> sp.csr_matrix:
        """Weighted adjacency matrix ``A`` in CSR form (do not mutate)."""
        return self._adjacency

    def successors(self, i: int) -> np.ndarray:
        a = self._adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def has_self_loop(self, i: int) -> bool:
        return bool(np.any(self.successors(i) == i))

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        a = self._adjacency
        diff = abs(a - a.T)
        return diff.nnz == 0 or float(diff.max()) <= tol

    def subgraph(self, nodes: Sequence[int]) -> "Graph":
        """Induced subgraph, relabeled so ``nodes[k]`` becomes node ``k``."""
        nodes = np.asarray(nodes, dtype=np.int64)
        a = self._adjacency[nodes][:, nodes].tocoo()
        if a.nnz == 0 and len(nodes) > 1:
            raise PreconditionError("induced subgraph has no edges")
        return Graph._build(len(nodes), a.row.astype(np.int64), a.col.astype(np.int64), a.data)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None


@dataclass(frozen=True)
class DegreeSummary:
    out_degree: np.ndarray
    in_degree: np.ndarray
    undirected_degree: np.ndarray | None
    edge_weight_total: float


def degrees(g: Graph) -> DegreeSummary:
    """Weighted out/in degrees; undirected degree only for symmetric graphs."""
    n = g.node_count
    out_deg = np.bincount(g.src, weights=g.weight, minlength=n).astype(float)
    in_deg = np.bincount(g.dst, weights=g.weight, minlength=n).astype(float)
    undirected = out_deg.copy() if g.is_symmetric() else None
    return DegreeSummary(out_deg, in_deg, undirected, float(g.weight.sum()))


@dataclass(frozen=True, eq=False)
class RowStochastic:
    """Row-normalized transition matrix with a dangling-row indicator.

    ``matrix`` is CSR; rows flagged in ``dangling`` are empty. The transpose
    is cached because every hot loop computes row-vector products ``x^T P``.
    """

    matrix: sp.csr_matrix
    dangling: np.ndarray
    _transpose: sp.csr_matrix = field(repr=False, default=None)

    def __post_init__(self):
        if self._transpose is None:
            object.__setattr__(self, "_transpose", self.matrix.T.tocsr())

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def has_dangling(self) -> bool:
        return bool(self.dangling.any())

    def row(self, i: int) -> list[tuple[int, float]]:
        m = self.matrix
        lo, hi = m.indptr[i], m.indptr[i + 1]
        return [(int(j), float(p)) for j, p in zip(m.indices[lo:hi], m.data[lo:hi])]

    def left_multiply(self, x: np.ndarray) -> np.ndarray:
        """Return ``x^T P`` as a 1-d array."""
        return self._transpose @ x

    def patched(self, u: np.ndarray) -> "RowStochastic":
        """Replace every dangling row by ``u`` (the ``P + d u^T`` patch)."""
        if not self.has_dangling:
            return self
        u = np.asarray(u, dtype=float)
        support = np.flatnonzero(u > 0)
        rows = np.flatnonzero(self.dangling)
        extra = sp.csr_matrix(
            (np.tile(u[support], rows.size),
             (np.repeat(rows, support.size), np.tile(support, rows.size))),
            shape=self.matrix.shape,
        )
        m = (self.matrix + extra).tocsr()
        m.sort_indices()
        return RowStochastic(m, np.zeros(self.n, dtype=bool))

    def as_graph(self) -> Graph:
        """The weighted digraph whose adjacency matrix is this matrix."""
        coo = self.matrix.tocoo()
        return Graph._build(self.n, coo.row.astype(np.int64), coo.col.astype(np.int64),
                            coo.data.astype(float))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def row_normalize(g: Graph) -> RowStochastic:
    """Divide each nonzero row of ``A`` by its weighted out-degree."""
    a = g.adjacency()
    out_deg = np.asarray(a.sum(axis=1)).ravel()
    dangling = out_deg == 0
    scale = np.zeros_like(out_deg)
    scale[~dangling] = 1.0 / out_deg[~dangling]
    m = sp.diags(scale) @ a
    m = sp.csr_matrix(m)
    m.sort_indices()
    return RowStochastic(m, dangling)


def resolve_dangling(g: Graph, policy="patch_uniform") -> Graph:
    """Graph whose row normalization equals ``P_A`` patched under ``policy``.

    ``policy`` is ``"reject"``, ``"patch_uniform"`` or a probability vector
    ``u``. Each dangling node gets out-edges weighted by ``u``.
    """
    deg = degrees(g).out_degree
    dangling = np.flatnonzero(deg == 0)
    if dangling.size == 0:
        return g
    u = dangling_vector(g.node_count, policy)
    support = np.flatnonzero(u > 0)
    src = np.concatenate([g.src, np.repeat(dangling, support.size)])
    dst = np.concatenate([g.dst, np.tile(support, dangling.size)])
    w = np.concatenate([g.weight, np.tile(u[support], dangling.size)])
    return Graph._build(g.node_count, src, dst, w)


def dangling_vector(n: int, policy) -> np.ndarray:
    """Patch vector ``u`` for ``policy``; raises under ``"reject"``."""
    if isinstance(policy, str):
        if policy == "reject":
            raise PreconditionError("graph has dangling nodes and dangling policy is 'reject'")
        if policy == "patch_uniform":
            return np.full(n, 1.0 / n)
        raise InputError(f"unknown dangling policy {policy!r}")
    return check_distribution(policy, n, name="dangling vector u")


def check_distribution(v, n: int | None = None, name: str = "vector",
                       tol: float = DISTRIBUTION_TOL) -> np.ndarray:
    """Validate a probability vector: finite, nonnegative, unit 1-norm."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise InputError(f"{name} must be one-dimensional")
    if n is not None and v.size != n:
        raise InputError(f"{name} has length {v.size}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} has non-finite entries")
    if np.any(v < 0):
        raise InputError(f"{name} has negative entries")
    if abs(v.sum() - 1.0) > tol:
        raise InputError(f"{name} must sum to 1 (got {v.sum():.17g})")
    return v


def parse_edge_list(text: str) -> Graph:
    """Parse the tab-separated edge-list format.

    ``#`` lines are comments; a ``# nodes=N`` comment before any data line
    declares the node count. Data lines are ``src<TAB>dst[<TAB>weight]``.
    """
    declared = None
    seen_data = False
    src, dst, w = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip().replace(" ", "")
            if not seen_data and declared is None and body.startswith("nodes="):
                try:
                    declared = int(body[len("nodes="):])
                except ValueError:
                    raise InputError(f"line {lineno}: bad node count header {raw!r}") from None
                if declared < 1:
                    raise InputError(f"line {lineno}: node count must be positive")
            continue
        seen_data = True
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InputError(f"line {lineno}: expected 2 or 3 fields, got {len(parts)}")
        try:
            s, d = int(parts[0]), int(parts[1])
            weight = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise InputError(f"line {lineno}: malformed edge {raw!r}") from None
        if s < 0 or d < 0:
            raise InputError(f"line {lineno}: negative node id")
        if not math.isfinite(weight):
            raise InputError(f"line {lineno}: non-finite weight")
        if weight < 0:
            raise InputError(f"line {lineno}: negative weight {weight}")
        if declared is not None and max(s, d) >= declared:
            raise InputError(
                f"line {lineno}: node id {max(s, d)} >= declared node count {declared}"
            )
        src.append(s)
        dst.append(d)
        w.append(weight)
    if declared is None:
        if not src:
            raise InputError("edge list has no edges and no '# nodes=N' header")
        declared = max(max(src), max(dst)) + 1
    return Graph._build(
        declared,
        np.asarray(src, dtype=np.int64),
        np.asarray(dst, dtype=np.int64),
        np.asarray(w, dtype=float),
    )


def format_edge_list(g: Graph) -> str:
    lines = [f"# nodes={g.node_count}"]
    lines += [f"{s}\t{d}\t{w!r}" for s, d, w in g.edges]
    return "\n".join(lines) + "\n"


def parse_vector(text: str, n: int | None = None, distribution: bool = True) -> np.ndarray:
    """Parse a vector file: a JSON array or one decimal per line."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            values = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON vector: {exc}") from None
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in values):
            raise InputError("JSON vector must contain only numbers")
    else:
        values = []
        for lineno, line in enumerate(stripped.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise InputError(f"line {lineno}: not a number: {line!r}") from None
    v = np.asarray(values, dtype=float)
    if distribution:
        return check_distribution(v, n)
    if n is not None and v.size != n:
        raise InputError(f"vector has length {v.size}, expected {n}")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise InputError("vector entries must be finite and nonnegative")
    return v
