"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 non-convergence, 3 internal
invariant violation. JSON goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, selftest
from .errors import ConvergenceError, InputError, InvariantError, PprfixError
from .graph import parse_edge_list, parse_vector, resolve_dangling, row_normalize
from .pagerank import (
    BoundaryPersonalizationWarning,
    PageRankConfig,
    classify_fixed_points,
    feedback_iterate,
    fixed_point_distance,
    pagerank,
)
from .spectral import left_perron
from .structure import decompose

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _lam(args) -> float:
    if not 0.0 < args.lam < 1.0:
        raise InputError("lambda must be in (0,1)")
    return args.lam


def _load(args):
    text = _read_text(args.graph)
    g = parse_edge_list(text)
    digest = "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()
    return g, digest


def _policy(args, n):
    choice = args.dangling
    if choice == "patch-uniform":
        return "patch_uniform"
    if choice == "reject":
        return "reject"
    if choice.startswith("patch:"):
        return parse_vector(_read_text(choice[len("patch:"):]), n)
    raise InputError(f"unknown dangling policy {choice!r}")


def _vector(path, n):
    if path is None:
        return np.full(n, 1.0 / n)
    return parse_vector(_read_text(path), n)


def _manifest(args, digest) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    return {
        "command": args.command,
        "parameters": params,
        "input_digest": digest,
        "tool_version": __version__,
    }


def _floats(x):
    return [float(v) for v in x]


def _emit(payload: dict):
    sys.stdout.write(json.dumps(payload, indent=2, allow_nan=False) + "\n")


def cmd_pagerank(args):
    g, digest = _load(args)
    cfg = PageRankConfig(_lam(args), _vector(args.v, g.node_count), _policy(args, g.node_count),
                         resolvent_tolerance=args.tol)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", BoundaryPersonalizationWarning)
        pi = pagerank(row_normalize(g), cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit({"vector": _floats(pi), "manifest": _manifest(args, digest)})
    return EXIT_OK


def cmd_iterate(args):
    g, digest = _load(args)
    cfg = PageRankConfig(_lam(args), _vector(args.v, g.node_count), _policy(args, g.node_count),
                         tolerance=args.tol, max_iterations=args.max_iter)
    stride = args.stride if args.trace else None
    trace = feedback_iterate(row_normalize(g), cfg, trace_stride=stride)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iter", "node", "value"])
            for k, x in zip(trace.iterate_steps, trace.iterates):
                for i, val in enumerate(x):
                    w.writerow([k, i, repr(float(val))])
        if trace.iterates_truncated:
            print("warning: trace truncated at the storage budget", file=sys.stderr)
    if args.mass_trace:
        with open(args.mass_trace, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iter", "block", "mass"])
            for k, row in enumerate(trace.cluster_mass):
                for b, val in enumerate(row):
                    w.writerow([k, b, repr(float(val))])
    _emit({
        "limit": _floats(trace.limit),
        "iterations": trace.iterations,
        "converged": trace.converged,
        "final_residual": trace.residuals[-1] if trace.residuals else None,
        "manifest": _manifest(args, digest),
    })
    if not trace.converged:
        print(f"error: no convergence within {args.max_iter} iterations", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_analyze(args):
    g, digest = _load(args)
    report = classify_fixed_points(g, _lam(args), _policy(args, g.node_count), tol=args.tol)
    _emit({**report.to_dict(), "manifest": _manifest(args, digest)})
    return EXIT_OK


def cmd_perron(args):
    g, digest = _load(args)
    ge = resolve_dangling(g, _policy(args, g.node_count))
    nf = decompose(ge)
    if args.block is None:
        if len(nf.blocks) != 1:
            raise InputError("graph is not strongly connected; use --block <index|all>")
        indices = [0]
    elif args.block == "all":
        indices = [b for b, t in enumerate(nf.trivial) if not t]
    else:
        try:
            b = int(args.block)
        except ValueError:
            raise InputError(f"--block must be an index or 'all', got {args.block!r}") from None
        if not 0 <= b < len(nf.blocks):
            raise InputError(f"block index {b} out of range (0..{len(nf.blocks) - 1})")
        if nf.trivial[b]:
            raise InputError(f"block {b} is a single node without self-loop; no Perron vector")
        indices = [b]
    results = []
    for b in indices:
        nodes = nf.blocks[b]
        res = left_perron(row_normalize(ge.subgraph(nodes)), args.tol, args.max_iter)
        results.append({"index": b, "nodes": nodes, "dangling": b >= nf.L, **res.to_dict()})
    if args.block is None or args.block != "all":
        payload = {k: results[0][k] for k in ("vector", "residual", "iterations")}
        if args.block is not None:
            payload = {"index": results[0]["index"], "nodes": results[0]["nodes"], **payload}
    else:
        payload = {"blocks": results}
    _emit({**payload, "manifest": _manifest(args, digest)})
    return EXIT_OK


def cmd_normal_form(args):
    g, digest = _load(args)
    nf = decompose(resolve_dangling(g, _policy(args, g.node_count)))
    _emit({**nf.to_dict(), "manifest": _manifest(args, digest)})
    return EXIT_OK


def cmd_verify(args):
    g, digest = _load(args)
    cand = parse_vector(_read_text(args.candidate), g.node_count)
    cfg = PageRankConfig(_lam(args), cand, _policy(args, g.node_count),
                         resolvent_tolerance=min(args.tol * 1e-3, 1e-12))
    dist = fixed_point_distance(row_normalize(g), cfg)
    _emit({"fixed_point": dist <= args.tol, "distance": dist, "manifest": _manifest(args, digest)})
    return EXIT_OK


def cmd_selftest(args):
    ok = selftest.run(args.seed, sys.stdout, inject_fault=args.inject_fault)
    return EXIT_OK if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pprfix", description="Fixed points of personalized PageRank.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def graph_cmd(name, func, help_, lam=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--graph", required=True, help="edge-list file")
        if lam:
            sp.add_argument("--lambda", dest="lam", type=float, default=0.85)
        sp.add_argument("--dangling", default="patch-uniform",
                        help="patch-uniform | reject | patch:u.json")
        sp.set_defaults(func=func)
        return sp

    sp = graph_cmd("pagerank", cmd_pagerank, "personalized PageRank vector")
    sp.add_argument("--v", help="personalization vector file (default uniform)")
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = graph_cmd("iterate", cmd_iterate, "feedback iteration x_k = PR(x_{k-1})")
    sp.add_argument("--v", help="initial personalization vector (default uniform)")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=1_000_000)
    sp.add_argument("--trace", help="CSV of iter,node,value")
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--mass-trace", help="CSV of iter,block,mass")

    sp = graph_cmd("analyze", cmd_analyze, "fixed-point existence and uniqueness report")
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = graph_cmd("perron", cmd_perron, "left Perron vector of the graph or a block", lam=False)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--max-iter", type=int, default=100_000)
    sp.add_argument("--block", help="normal-form block index or 'all'")

    graph_cmd("normal-form", cmd_normal_form, "SCC normal form with dangling clusters last",
              lam=False)

    sp = graph_cmd("verify", cmd_verify, "check whether a candidate vector is a fixed point")
    sp.add_argument("--candidate", required=True)
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = sub.add_parser("selftest", help="run the embedded invariant suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (PprfixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
