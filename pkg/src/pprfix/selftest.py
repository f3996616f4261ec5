"""Embedded invariant checks run by ``pprfix selftest``.

Every check draws its graphs from a generator seeded by ``seed`` and logs
one line with a fixed-precision error figure, so logs are byte-identical
across runs with the same seed.
"""
from __future__ import annotations

import sys

import numpy as np

from . import generators as gen
from .graph import RowStochastic, row_normalize, resolve_dangling
from .oracle import reachability_classes, reachability_sinks
from .pagerank import PageRankConfig, classify_fixed_points, feedback_iterate, is_fixed_point
from .spectral import ResolventConfig, apply_resolvent

LAMBDAS = (0.15, 0.5, 0.85)


def _row_sums(rng, inject_fault):
    worst = 0.0
    for _ in range(10):
        P = row_normalize(gen.strongly_connected(rng, int(rng.integers(3, 30))))
        if inject_fault:
            m = P.matrix.copy()
            m.data[m.indptr[0]:m.indptr[1]] *= 1.0 + 1e-6
            P = RowStochastic(m, P.dangling)
        worst = max(worst, float(np.abs(np.asarray(P.matrix.sum(axis=1)).ravel() - 1).max()))
    return worst <= 1e-12, worst


def _isometry(rng, inject_fault):
    worst = 0.0
    for _ in range(10):
        g = gen.strongly_connected(rng, int(rng.integers(3, 30)))
        P = row_normalize(g)
        for lam in LAMBDAS:
            x = gen.random_distribution(rng, g.node_count)
            y = apply_resolvent(x, P, ResolventConfig(lam))
            worst = max(worst, abs(float(np.abs(y).sum()) - 1.0))
    return worst <= 1e-10, worst


def _diagonal_split(rng, inject_fault):
    worst = 0.0
    for _ in range(5):
        sizes = rng.integers(2, 8, size=2)
        g, blocks = gen.block_diagonal(rng, sizes)
        v = gen.random_distribution(rng, g.node_count)
        trace = feedback_iterate(row_normalize(g), PageRankConfig(0.85, v, tolerance=1e-13))
        for b in blocks:
            worst = max(worst, abs(trace.limit[b].sum() - v[b].sum()))
    return worst <= 1e-10, worst


def _zero_block_decay(rng, inject_fault):
    worst = 0.0
    for lam in LAMBDAS:
        g = gen.single_source(rng, int(rng.integers(2, 10)))
        v = gen.random_distribution(rng, g.node_count)
        cfg = PageRankConfig(lam, v, tolerance=0.0, max_iterations=50)
        trace = feedback_iterate(row_normalize(g), cfg, trace_stride=1)
        for k, x in zip(trace.iterate_steps, trace.iterates):
            worst = max(worst, abs(x[0] - (1 - lam) ** k * v[0]))
    return worst <= 1e-12, worst


def _classifier(rng, inject_fault):
    mismatches = 0
    checked = 0
    while checked < 40:
        n = int(rng.integers(1, 6))
        g = gen.random_digraph(rng, n)
        if not gen.is_weakly_connected(g):
            continue
        checked += 1
        ge = resolve_dangling(g)
        sinks = reachability_sinks(ge)
        L = len(reachability_classes(ge)) - len(sinks)
        report = classify_fixed_points(g, 0.85)
        if (report.L, report.M, report.unique, report.exists_interior) != (
            L, len(sinks), len(sinks) == 1, L == 0
        ):
            mismatches += 1
            continue
        P = row_normalize(ge)
        w = rng.dirichlet(np.ones(report.M))
        candidate = sum(a * c for a, c in zip(w, report.vertices))
        if not is_fixed_point(P, PageRankConfig(0.85, candidate), 1e-8):
            mismatches += 1
    return mismatches == 0, float(mismatches)


CHECKS = [
    ("row-sums", _row_sums),
    ("resolvent-isometry", _isometry),
    ("diagonal-mass-split", _diagonal_split),
    ("zero-block-decay", _zero_block_decay),
    ("classifier-vs-oracle", _classifier),
]


def run(seed: int = 0, out=None, inject_fault: bool = False) -> bool:
    """Run every check; write one log line per check to ``out``."""
    out = out or sys.stdout
    rng = np.random.default_rng(seed)
    all_ok = True
    out.write(f"selftest seed={seed}\n")
    for name, check in CHECKS:
        ok, err = check(rng, inject_fault)
        all_ok &= ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name} max_error={err:.6e}\n")
    out.write(f"{'OK' if all_ok else 'FAILED'}\n")
    return all_ok
