"""Seeded random graph families used by ``selftest`` and the test suite.

Each generator takes a ``numpy.random.Generator`` so runs are reproducible.
Block-structured generators relabel nodes randomly and return the ground
truth blocks alongside the graph.
"""
from __future__ import annotations

import numpy as np

from .graph import Graph, degrees


def _weights(rng, k, weighted):
    if weighted:
        return rng.uniform(0.5, 2.0, size=k)
    return np.ones(k)


def _cycle_edges(nodes):
    nodes = list(nodes)
    return [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]


def _strong_block_edges(rng, nodes, density=0.3):
    """Edges making ``nodes`` strongly connected: a random Hamiltonian
    cycle plus random chords. A single node gets a self-loop."""
    nodes = list(nodes)
    if len(nodes) == 1:
        return [(nodes[0], nodes[0])]
    order = rng.permutation(nodes)
    edges = _cycle_edges(order)
    k = len(nodes)
    extra = rng.random((k, k)) < density
    for i in range(k):
        for j in range(k):
            if extra[i, j]:
                edges.append((nodes[i], nodes[j]))
    return edges


def strongly_connected(rng, n, density=0.3, weighted=True) -> Graph:
    edges = _strong_block_edges(rng, range(n), density)
    w = _weights(rng, len(edges), weighted)
    return Graph.from_edges(n, [(s, d, x) for (s, d), x in zip(edges, w)])


def symmetric_connected(rng, n, density=0.2, weighted=True) -> Graph:
    """Random connected undirected graph stored as a symmetric digraph."""
    order = rng.permutation(n)
    pairs = {tuple(sorted((int(order[i]), int(order[rng.integers(0, i)])))) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                pairs.add((i, j))
    pairs = sorted(pairs)
    w = _weights(rng, len(pairs), weighted)
    edges = []
    for (i, j), x in zip(pairs, w):
        edges += [(i, j, x), (j, i, x)]
    return Graph.from_edges(n, edges)


def balanced_strongly_connected(rng, n, cycles=3, weighted=True) -> Graph:
    """Union of weighted directed cycles, the first Hamiltonian.

    Each cycle adds equal in- and out-weight at its nodes, so the result is
    Eulerian-balanced and strongly connected.
    """
    edges = []
    first = rng.permutation(n)
    all_cycles = [first] + [
        rng.choice(n, size=rng.integers(2, n + 1), replace=False) for _ in range(cycles)
    ]
    for cyc in all_cycles:
        w = float(_weights(rng, 1, weighted)[0])
        edges += [(s, d, w) for s, d in _cycle_edges(cyc)]
    return Graph.from_edges(n, edges)


def unbalanced_strongly_connected(rng, n, weighted=True) -> Graph:
    """Hamiltonian cycle plus chords that leave some node unbalanced."""
    while True:
        g = strongly_connected(rng, n, density=0.35, weighted=weighted)
        deg = degrees(g)
        if np.abs(deg.in_degree - deg.out_degree).max() > 0.25:
            return g


def _relabel(rng, n, edges, blocks):
    perm = rng.permutation(n)
    edges = [(int(perm[s]), int(perm[d]), w) for s, d, w in edges]
    blocks = [sorted(int(perm[i]) for i in b) for b in blocks]
    return Graph.from_edges(n, edges), blocks


def block_diagonal(rng, sizes, weighted=True, shuffle=True):
    """Disjoint strongly connected blocks (the diagonal case)."""
    edges, blocks, start = [], [], 0
    for s in sizes:
        nodes = list(range(start, start + s))
        e = _strong_block_edges(rng, nodes)
        w = _weights(rng, len(e), weighted)
        edges += [(a, b, x) for (a, b), x in zip(e, w)]
        blocks.append(nodes)
        start += s
    if not shuffle:
        return Graph.from_edges(start, edges), blocks
    return _relabel(rng, start, edges, blocks)


def reducible(rng, transient_sizes, dangling_sizes, trivial_prob=0.3, bridge_prob=0.3,
              weighted=True, shuffle=True):
    """Graph with prescribed transient and dangling blocks.

    Transient block i links only to later blocks and always has at least
    one such link; size-1 transient blocks lose their self-loop with
    probability ``trivial_prob``. Returns ``(graph, transient_blocks,
    dangling_blocks)``.
    """
    edges, blocks, start = [], [], 0
    sizes = list(transient_sizes) + list(dangling_sizes)
    L = len(transient_sizes)
    for k, s in enumerate(sizes):
        nodes = list(range(start, start + s))
        if k < L and s == 1 and rng.random() < trivial_prob:
            e = []
        else:
            e = _strong_block_edges(rng, nodes)
        w = _weights(rng, len(e), weighted)
        edges += [(a, b, x) for (a, b), x in zip(e, w)]
        blocks.append(nodes)
        start += s
    n = start
    for i in range(L):
        later = [v for b in blocks[i + 1:] for v in b]
        forced_src = blocks[i][rng.integers(0, len(blocks[i]))]
        forced_dst = later[rng.integers(0, len(later))]
        bridges = {(forced_src, forced_dst)}
        for u in blocks[i]:
            for v in later:
                if rng.random() < bridge_prob / len(later) * 2:
                    bridges.add((u, v))
        for (u, v), x in zip(sorted(bridges), _weights(rng, len(bridges), weighted)):
            edges.append((u, v, x))
    if not shuffle:
        return Graph.from_edges(n, edges), blocks[:L], blocks[L:]
    g, relabeled = _relabel(rng, n, edges, blocks)
    return g, relabeled[:L], relabeled[L:]


def single_source(rng, core_size, weighted=True):
    """One source node (id 0) feeding a strongly connected core."""
    core = list(range(1, core_size + 1))
    e = _strong_block_edges(rng, core)
    w = _weights(rng, len(e), weighted)
    edges = [(a, b, x) for (a, b), x in zip(e, w)]
    targets = rng.choice(core, size=rng.integers(1, core_size + 1), replace=False)
    edges += [(0, int(t), float(x)) for t, x in zip(targets, _weights(rng, len(targets), weighted))]
    return Graph.from_edges(core_size + 1, edges)


def random_digraph(rng, n, p=0.35):
    """Erdos-Renyi style digraph on ``n`` nodes (self-loops allowed)."""
    mask = rng.random((n, n)) < p
    src, dst = np.nonzero(mask)
    edges = list(zip(src.tolist(), dst.tolist()))
    if not edges:
        edges = [(0, 0)]
    return Graph.from_edges(n, edges)


def is_weakly_connected(g: Graph) -> bool:
    n = g.node_count
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s, d in zip(g.src, g.dst):
        parent[find(int(s))] = find(int(d))
    return len({find(i) for i in range(n)}) == 1


def random_distribution(rng, n, positive=True):
    x = rng.random(n) + (0.01 if positive else 0.0)
    return x / x.sum()
