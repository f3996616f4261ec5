"""Strongly connected components, dangling clusters and the block normal form."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError
from .graph import Graph, RowStochastic, degrees

BALANCE_TOL = 1e-12


@dataclass(frozen=True)
class SccDecomposition:
    """Strongly connected components of a graph.

    Components are numbered by their smallest node id and list their nodes
    in ascending order.
    """

    components: list[list[int]]
    component_of: np.ndarray
    condensation_edges: frozenset[tuple[int, int]]
    is_trivial: list[bool]

    @property
    def count(self) -> int:
        return len(self.components)

    def successors(self) -> list[set[int]]:
        out = [set() for _ in self.components]
        for a, b in self.condensation_edges:
            out[a].add(b)
        return out


@dataclass(frozen=True)
class NormalForm:
    """Permutation putting ``P_A`` in block upper-triangular form.

    ``permutation[k]`` is the original id of the node placed at position k.
    ``blocks`` lists the node ids of every diagonal block in order; the
    first ``L`` are non-dangling, the last ``M`` are dangling clusters.
    """

    permutation: np.ndarray
    blocks: list[list[int]]
    trivial: list[bool]
    block_sizes_nondangling: list[int]
    block_sizes_dangling: list[int]

    @property
    def L(self) -> int:
        return len(self.block_sizes_nondangling)

    @property
    def M(self) -> int:
        return len(self.block_sizes_dangling)

    @property
    def dangling_blocks(self) -> list[list[int]]:
        return self.blocks[self.L:]

    @property
    def transient_nodes(self) -> np.ndarray:
        return self.permutation[: sum(self.block_sizes_nondangling)]

    def block_index(self) -> np.ndarray:
        """Array mapping each original node id to its block position."""
        out = np.empty(len(self.permutation), dtype=np.int64)
        for b, nodes in enumerate(self.blocks):
            out[nodes] = b
        return out

    def block_masses(self, x: np.ndarray) -> np.ndarray:
        return np.bincount(self.block_index(), weights=x, minlength=len(self.blocks))

    def to_dict(self) -> dict:
        return {
            "permutation": [int(i) for i in self.permutation],
            "blocks": [
                {"nodes": [int(i) for i in nodes], "dangling": b >= self.L, "trivial": t}
                for b, (nodes, t) in enumerate(zip(self.blocks, self.trivial))
            ],
            "L": self.L,
            "M": self.M,
        }


def _tarjan(g: Graph) -> list[list[int]]:
    # Iterative Tarjan; an explicit call stack of (node, next-edge cursor).
    n = g.node_count
    a = g.adjacency()
    indptr, indices = a.indptr, a.indices
    index = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    on_stack = np.zeros(n, dtype=bool)
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        call = [(root, indptr[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while call:
            v, cursor = call[-1]
            end = indptr[v + 1]
            pushed = False
            while cursor < end:
                w = indices[cursor]
                cursor += 1
                if index[w] < 0:
                    call[-1] = (v, cursor)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    call.append((w, indptr[w]))
                    pushed = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            call.pop()
            if call:
                parent = call[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(int(w))
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def scc(g: Graph) -> SccDecomposition:
    """Maximal strongly connected components and the condensation DAG."""
    comps = sorted(_tarjan(g), key=lambda c: c[0])
    component_of = np.empty(g.node_count, dtype=np.int64)
    for k, c in enumerate(comps):
        component_of[c] = k
    cs, cd = component_of[g.src], component_of[g.dst]
    mask = cs != cd
    cond = frozenset(zip(cs[mask].tolist(), cd[mask].tolist()))
    trivial = [len(c) == 1 and not g.has_self_loop(c[0]) for c in comps]
    return SccDecomposition(comps, component_of, cond, trivial)


def dangling_clusters(d: SccDecomposition, g: Graph | None = None) -> list[int]:
    """Indices of components with no arcs leaving them (condensation sinks)."""
    has_out = np.zeros(d.count, dtype=bool)
    for a, _ in d.condensation_edges:
        has_out[a] = True
    return [k for k in range(d.count) if not has_out[k]]


def normal_form(d: SccDecomposition, g: Graph | None = None) -> NormalForm:
    """Order components topologically with dangling clusters last.

    Non-dangling components follow a topological order of the condensation,
    ties broken by smallest node id; dangling clusters follow, sorted by
    smallest node id.
    """
    sinks = set(dangling_clusters(d))
    succ = d.successors()
    indeg = np.zeros(d.count, dtype=np.int64)
    for _, b in d.condensation_edges:
        indeg[b] += 1
    heap = [(d.components[k][0], k) for k in range(d.count) if indeg[k] == 0 and k not in sinks]
    heapq.heapify(heap)
    order = []
    # sinks are withheld from the heap; removing them never unblocks anything
    while heap:
        _, k = heapq.heappop(heap)
        order.append(k)
        for b in succ[k]:
            indeg[b] -= 1
            if indeg[b] == 0 and b not in sinks:
                heapq.heappush(heap, (d.components[b][0], b))
    if len(order) != d.count - len(sinks):
        raise InvariantError("condensation is not acyclic")
    order += sorted(sinks, key=lambda k: d.components[k][0])
    blocks = [d.components[k] for k in order]
    perm = np.array([i for c in blocks for i in c], dtype=np.int64)
    n_trans = d.count - len(sinks)
    return NormalForm(
        permutation=perm,
        blocks=blocks,
        trivial=[d.is_trivial[k] for k in order],
        block_sizes_nondangling=[len(c) for c in blocks[:n_trans]],
        block_sizes_dangling=[len(c) for c in blocks[n_trans:]],
    )


def decompose(g: Graph) -> NormalForm:
    """Shorthand for ``normal_form(scc(g))``."""
    return normal_form(scc(g), g)


def permute(P: RowStochastic, nf: NormalForm) -> np.ndarray:
    """Dense ``S P S^T`` for inspection and tests."""
    p = nf.permutation
    return P.matrix[p][:, p].toarray()


def check_block_form(P: RowStochastic, nf: NormalForm) -> bool:
    """True iff ``S P S^T`` has the reduced block pattern exactly.

    Every block below the diagonal is zero, and each dangling block row is
    zero outside its own diagonal block.
    """
    block = nf.block_index()
    coo = P.matrix.tocoo()
    bi, bj = block[coo.row], block[coo.col]
    nz = coo.data != 0
    if np.any(nz & (bi > bj)):
        return False
    dangling_row = bi >= nf.L
    return not np.any(nz & dangling_row & (bi != bj))


def is_eulerian_balanced(g: Graph, tol: float = BALANCE_TOL) -> bool:
    """True iff weighted in-degree equals out-degree at every node."""
    deg = degrees(g)
    return bool(np.all(np.abs(deg.in_degree - deg.out_degree) <= tol))


def is_strongly_connected(g: Graph) -> bool:
    return len(_tarjan(g)) == 1
