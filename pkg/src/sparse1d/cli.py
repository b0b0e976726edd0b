"""Command-line driver.

    sparse1d multiply A.mtx B.mtx --procs 4 --blocks 64 --out C.mtx
    sparse1d square A.mtx --strategy random:1 --report square.json
    sparse1d galerkin A.mtx --mode outer_product_right
    sparse1d bc G.mtx --sources 64 --batch-size 16
    sparse1d analyze A.mtx --procs 16 --threshold 0.3
    sparse1d partition A.mtx --procs 8 --out parts.txt

Exit status: 0 on success, 1 on I/O, parse or data errors (and on oracle
mismatch), 2 on bad flags or configuration.
"""
import argparse
import json
import sys

import numpy as np

from . import __version__
from .apps import RuntimeConfig, bc_approx, galerkin, mis2_aggregate
from .core import transpose
from .errors import ConfigError, ParseError, ShapeError
from .layout import (Strategy, compute_vertex_weights, greedy_partition,
                     write_partition_vector)
from .local import spgemm_local
from .mmio import read_matrix_market, write_matrix_market
from .runtime import DEFAULT_BLOCKS, DEFAULT_CV_THRESHOLD, analyze_cv, spgemm_1d
from .semiring import get_semiring

REL_TOL = 1e-10


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _threshold(text):
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {v}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--procs", "-P", type=_positive, default=1,
                        help="number of logical processes (default 1)")
    common.add_argument("--blocks", "-K", type=_positive, default=DEFAULT_BLOCKS,
                        help=f"block reads per remote process (default {DEFAULT_BLOCKS})")
    common.add_argument("--coalesce", action="store_true",
                        help="merge adjacent chosen blocks into a single read")
    common.add_argument("--strategy", default="identity",
                        help="identity | random:SEED | partition:PATH")
    common.add_argument("--symmetrize", action="store_true",
                        help="allow partition strategies on pattern-asymmetric input")
    common.add_argument("--semiring", default="real", choices=["real", "integer", "boolean"])
    common.add_argument("--workers", type=_positive, default=None,
                        help="threads used to run the logical processes")
    common.add_argument("--report", help="write the JSON report here (default stdout)")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock phase times in the report")

    p = argparse.ArgumentParser(prog="sparse1d", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("multiply", parents=[common], help="C = A B")
    m.add_argument("a")
    m.add_argument("b")
    m.add_argument("--out", help="write C as Matrix Market")
    m.add_argument("--oracle", action="store_true", help="diff against a serial multiply")

    s = sub.add_parser("square", parents=[common], help="C = A A")
    s.add_argument("a")
    s.add_argument("--out")
    s.add_argument("--oracle", action="store_true")

    g = sub.add_parser("galerkin", parents=[common], help="R^T A R")
    g.add_argument("a")
    g.add_argument("--restriction", help="R as Matrix Market (default: MIS-2 aggregation)")
    g.add_argument("--mode", default="onedim", choices=["onedim", "outer_product_right"])
    g.add_argument("--seed", type=int, default=None, help="MIS-2 tie-break seed")
    g.add_argument("--out")
    g.add_argument("--oracle", action="store_true")

    b = sub.add_parser("bc", parents=[common], help="batched betweenness centrality")
    b.add_argument("graph")
    b.add_argument("--sources", type=int, default=None,
                   help="number of sampled sources (default: all vertices)")
    b.add_argument("--batch-size", type=_positive, default=4096)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", help="write scores, one per line")

    a = sub.add_parser("analyze", parents=[common], help="CV/memA without multiplying")
    a.add_argument("a")
    a.add_argument("b", nargs="?", help="right operand (default: A itself)")
    a.add_argument("--threshold", type=_threshold, default=DEFAULT_CV_THRESHOLD)

    t = sub.add_parser("partition", parents=[common], help="built-in weighted partitioner")
    t.add_argument("a")
    t.add_argument("--out", required=True, help="partition vector file")
    return p


def _strategy(args):
    return Strategy.parse(args.strategy, symmetrize=args.symmetrize)


def _runtime(args):
    return RuntimeConfig(procs=args.procs, blocks=args.blocks, strategy=_strategy(args),
                         workers=args.workers, coalesce=args.coalesce)


def _oracle(C, ref):
    same = C.shape == ref.shape and C.nnz == ref.nnz
    if same:
        ca, ra = C.coo(), ref.coo()
        same = np.array_equal(ca[0], ra[0]) and np.array_equal(ca[1], ra[1])
    diff = None
    if same:
        x = C.data.astype(np.float64)
        y = ref.data.astype(np.float64)
        err = np.abs(x - y)
        diff = float(err.max()) if err.size else 0.0
        scale = np.maximum(np.abs(y), np.finfo(float).tiny)
        same = bool(np.all(err <= REL_TOL * scale))
    return {"pattern_equal": bool(C.shape == ref.shape and C.nnz == ref.nnz),
            "max_abs_diff": diff, "passed": bool(same)}


def _config_dict(args):
    d = {k: v for k, v in vars(args).items() if k not in ("report", "timings")}
    return d


def _emit(report, args):
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_multiply(args, square=False):
    semiring = get_semiring(args.semiring)
    A = read_matrix_market(args.a, semiring)
    B = A if square else read_matrix_market(args.b, semiring)
    res = spgemm_1d(A, B, args.procs, _strategy(args), args.blocks, semiring,
                    workers=args.workers, coalesce=args.coalesce)
    report = {"command": args.command, "invocation": _config_dict(args),
              "shape": list(res.matrix.shape), "nnz": res.matrix.nnz,
              "metrics": res.metrics.to_dict(timings=args.timings)}
    status = 0
    if args.oracle:
        report["oracle"] = _oracle(res.matrix, spgemm_local(A, B, semiring))
        status = 0 if report["oracle"]["passed"] else 1
    if args.out:
        write_matrix_market(res.matrix, args.out)
    return report, status


def _cmd_galerkin(args):
    A = read_matrix_market(args.a, get_semiring("real"))
    if args.restriction:
        R = read_matrix_market(args.restriction, get_semiring("real"))
    else:
        R = mis2_aggregate(A, seed=args.seed).matrix
    res = galerkin(A, R, args.mode, _runtime(args))
    report = {"command": "galerkin", "invocation": _config_dict(args),
              "coarse_shape": list(res.matrix.shape), "nnz": res.matrix.nnz,
              "restriction_columns": R.ncols,
              "left": res.left.metrics.to_dict(timings=args.timings),
              "right": res.right.metrics.to_dict(timings=args.timings)}
    status = 0
    if args.oracle:
        Rt = transpose(R)
        ref = spgemm_local(spgemm_local(Rt, A), R)
        report["oracle"] = _oracle(res.matrix, ref)
        status = 0 if report["oracle"]["passed"] else 1
    if args.out:
        write_matrix_market(res.matrix, args.out)
    return report, status


def _cmd_bc(args):
    G = read_matrix_market(args.graph, get_semiring("real"))
    num = G.nrows if args.sources is None else args.sources
    res = bc_approx(G, num, args.batch_size, args.seed, _runtime(args))
    report = {"command": "bc", "invocation": _config_dict(args), "depth": res.depth,
              "num_sources": int(res.sources.size),
              "forward_bytes": sum(m.bytes_fetched for m in res.forward),
              "backward_bytes": sum(m.bytes_fetched for m in res.backward),
              "forward_iterations": len(res.forward),
              "backward_iterations": len(res.backward),
              "max_score": float(res.scores.max()) if res.scores.size else 0.0}
    if args.out:
        np.savetxt(args.out, res.scores, fmt="%.17g")
    return report, 0


def _cmd_analyze(args):
    A = read_matrix_market(args.a)
    B = read_matrix_market(args.b) if args.b else A
    cv = analyze_cv(A, B, args.procs, _strategy(args), args.blocks, args.threshold,
                    coalesce=args.coalesce)
    report = {"command": "analyze", "invocation": _config_dict(args), **cv.to_dict(),
              "metrics": cv.metrics.to_dict(timings=False)}
    if cv.advisory:
        report["message"] = ("communication volume is high relative to A; "
                             "it is advisable to apply graph partitioning")
        print(cv.message(), file=sys.stderr)
    return report, 0


def _cmd_partition(args):
    A = read_matrix_market(args.a)
    res = greedy_partition(A, args.procs, compute_vertex_weights(A))
    write_partition_vector(res.parts, args.out)
    report = {"command": "partition", "invocation": _config_dict(args),
              "method": res.method, "imbalance": res.imbalance, "bound": res.bound,
              "balanced": res.balanced, "cut_edges": res.cut_edges,
              "part_weights": res.part_weights.tolist()}
    if not res.balanced:
        print(f"warning: imbalance {res.imbalance:.3f} exceeds {res.bound}", file=sys.stderr)
    return report, 0


def run(argv=None):
    """Parse ``argv`` and execute one command. Returns the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "multiply": _cmd_multiply,
        "square": lambda a: _cmd_multiply(a, square=True),
        "galerkin": _cmd_galerkin,
        "bc": _cmd_bc,
        "analyze": _cmd_analyze,
        "partition": _cmd_partition,
    }
    try:
        report, status = handlers[args.command](args)
        _emit(report, args)
    except ConfigError as e:
        print(f"sparse1d: configuration error: {e}", file=sys.stderr)
        return 2
    except (OSError, ParseError, ShapeError, ValueError, IndexError) as e:
        print(f"sparse1d: error: {e}", file=sys.stderr)
        return 1
    return status


def main():
    sys.exit(run())
