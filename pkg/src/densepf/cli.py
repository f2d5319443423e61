"""Command-line front end.

    densepf per --matrix A.csv --delta 0.5
    densepf separate --graph g.txt --epsilon 0.5 --gamma 0.5
    densepf verify thm13 --n 6 --delta 0.5 --trials 20 --seed 1
    densepf gen matrix --n 8 --delta 0.3 --seed 7 --out A.csv

Exit codes: 0 success, 1 a verified inequality failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .config import caps
from .core import DirectedGraph, LogValue, random_graph, random_symmetric_matrix, random_weight_matrix
from .errors import DensePFError
from .io import ingest_graph, ingest_matrix, ingest_symmetric, write_graph, write_matrix
from .oracles import hamiltonian_permanent
from .scalable import (DEFAULT_MAX_ITER, DEFAULT_TOL, PartitionReport, permanent_bracket,
                       permanent_report, spanning_tree_report, trace_report)
from .separator import SeparationInstance, separate
from .verify import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


def _clean(obj):
    """Replace non-finite floats by strings so the output is strict JSON."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False)


def _fmt_log(v: LogValue) -> str:
    if v.sign == 0:
        return "0"
    x = v.value
    if math.isfinite(x) and abs(v.logmag) < 600:
        return f"{x:.12g}  (log {v.logmag:.9f})"
    return f"exp({v.logmag:.9f})"


def _report_text(title: str, rep: PartitionReport) -> str:
    lines = [f"{title} [{rep.method}]", f"  value : {_fmt_log(rep.value)}"]
    if rep.lower != rep.upper:
        lines += [f"  lower : {_fmt_log(rep.lower)}", f"  upper : {_fmt_log(rep.upper)}",
                  f"  sinkhorn iterations: {rep.iterations}, residual {rep.residual:.3e}"]
    if rep.exact is not None:
        lines.append(f"  exact : {_fmt_log(rep.exact)}")
        lines.append(f"  log(upper/exact): {rep.log_ratio:.6f}")
    return "\n".join(lines)


def cmd_per(args) -> tuple[dict, str, int]:
    a = ingest_matrix(args.matrix, args.delta)
    out = {"n": a.n, "delta": a.delta}
    text = []
    if a.n <= caps().exact_per:
        exact = permanent_report(a)
        out["exact"] = exact.to_json()
        text.append(_report_text("per A (exact)", exact))
    if a.n > 1:
        bracket = permanent_bracket(a, tol=args.tol, max_iter=args.max_iter)
        out["bracket"] = bracket.to_json()
        text.append(_report_text("per A (scaling bracket)", bracket))
    return out, "\n".join(text), EXIT_OK


def cmd_ham(args) -> tuple[dict, str, int]:
    if args.graph:
        g = ingest_graph(args.graph)
        m, label = g.adjacency(), "Hamiltonian cycles of G"
    else:
        m, label = ingest_matrix(args.matrix, args.delta), "ham A"
    method = args.method
    if method == "auto":
        method = "dp"
    v = hamiltonian_permanent(m, method)
    return ({"n": int(np.asarray(getattr(m, "entries", m)).shape[0]), "method": method,
             "value": v.to_json()}, f"{label} [{method}]: {_fmt_log(v)}", EXIT_OK)


def cmd_trace(args) -> tuple[dict, str, int]:
    a = ingest_matrix(args.matrix, args.delta)
    k = args.k or a.n
    rep = trace_report(a, k)
    return {"n": a.n, "k": k, "report": rep.to_json()}, _report_text(f"trace A^{k}", rep), EXIT_OK


def cmd_spt(args) -> tuple[dict, str, int]:
    a = ingest_symmetric(args.matrix, args.delta)
    rep = spanning_tree_report(a)
    return {"n": a.n, "report": rep.to_json()}, _report_text("spt A", rep), EXIT_OK


def cmd_separate(args) -> tuple[dict, str, int]:
    g = ingest_graph(args.graph)
    inst = SeparationInstance(g, args.epsilon, args.gamma, args.delta)
    res = separate(inst, method=args.method, tol=args.tol)
    out = res.to_json()
    b = res.bounds
    text = [f"verdict: {res.verdict.value}  [{res.method}, delta={res.delta_used:g}]",
            f"  log per B      in [{b.log_per_lower:.6f}, {b.log_per_upper:.6f}]",
            f"  log ham B      in [{b.log_ham_lower:.6f}, {b.log_ham_upper:.6f}]"]
    if b.log_ham_exact is not None:
        text.append(f"  log ham B      = {b.log_ham_exact:.6f} (exact)")
    text += [f"  log many-threshold = {b.log_threshold_many:.6f}",
             f"  log far-threshold  = {b.log_threshold_far:.6f}"]
    if res.diagnostic:
        text.append(f"  note: {res.diagnostic}")
    return out, "\n".join(text), EXIT_OK


def _fmt_num(x) -> str:
    return "-" if x is None else f"{x:.6g}"


def cmd_verify(args) -> tuple[dict, str, int]:
    rows = []
    for n in args.n:
        for delta in args.delta:
            rows.extend(run_suite(args.suite, n, delta, trials=args.trials, seed=args.seed))
    bad = [r for r in rows if not r.satisfied]
    vac = sum(r.vacuous for r in rows if r.satisfied)
    header = f"{'check':<26}{'n':>4}{'delta':>8}{'threshold':>14}{'lhs':>14}{'rhs':>14}  status"
    text = [header]
    for r in rows:
        status = "VIOLATED" if not r.satisfied else "ok (vacuous)" if r.vacuous else "ok"
        text.append(f"{r.theorem:<26}{r.n:>4}{r.delta:>8.3g}{_fmt_num(r.threshold):>14}"
                    f"{_fmt_num(r.lhs):>14}{_fmt_num(r.rhs):>14}  {status}")
    text.append(f"{len(rows) - len(bad)}/{len(rows)} satisfied ({vac} vacuous), "
                f"{len(bad)} violated")
    out = {"suite": args.suite, "seed": args.seed, "trials": args.trials,
           "rows": [r.to_json() for r in rows],
           "summary": {"total": len(rows), "satisfied": len(rows) - len(bad),
                       "vacuous": vac, "violated": len(bad)}}
    return out, "\n".join(text), EXIT_VIOLATED if bad else EXIT_OK


def cmd_gen(args) -> tuple[dict, str, int]:
    rng = np.random.default_rng(args.seed)
    if args.kind == "graph":
        obj = random_graph(args.n, args.p, rng)
        write_graph(obj, args.out)
        desc = f"graph n={obj.n} m={len(obj.edges)}"
    elif args.kind == "empty":
        obj = DirectedGraph.empty(args.n)
        write_graph(obj, args.out)
        desc = f"empty graph n={obj.n}"
    else:
        make = random_weight_matrix if args.kind == "matrix" else random_symmetric_matrix
        obj = make(args.n, args.delta, rng)
        write_matrix(obj, args.out)
        desc = f"{args.kind} n={obj.n} delta={obj.delta:g}"
    return ({"kind": args.kind, "n": args.n, "seed": args.seed, "out": str(args.out)},
            f"wrote {desc} to {args.out}", EXIT_OK)


def _positive(x):
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {x}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="densepf", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def matrix_args(sp, required=True):
        sp.add_argument("--matrix", required=required, help="CSV matrix file")
        sp.add_argument("--delta", type=float, required=required,
                        help="certified lower bound on the entries")

    sp = add("per", help="permanent: exact when feasible plus scaling bracket")
    matrix_args(sp)
    sp.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
    sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    sp.set_defaults(func=cmd_per)

    sp = add("ham", help="Hamiltonian permanent of a matrix or cycle count of a graph")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix")
    src.add_argument("--graph")
    sp.add_argument("--delta", type=float)
    sp.add_argument("--method", choices=("auto", "dp", "naive"), default="auto")
    sp.set_defaults(func=cmd_ham)

    sp = add("trace", help="trace A^k (closed walks of length k)")
    matrix_args(sp)
    sp.add_argument("--k", type=int, default=None, help="walk length, default n")
    sp.set_defaults(func=cmd_trace)

    sp = add("spt", help="spanning-tree partition function of a symmetric matrix")
    matrix_args(sp)
    sp.set_defaults(func=cmd_spt)

    sp = add("separate", help="many-Hamiltonian vs far-from-Hamiltonian decision")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--delta", type=float, default=None,
                    help="perturbation weight, default eps^(1/gamma)/2")
    sp.add_argument("--method", choices=("auto", "exact-ham", "certified-bracket"),
                    default="auto")
    sp.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
    sp.set_defaults(func=cmd_separate)

    sp = add("verify", help="exact verification suite on random instances")
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--delta", type=float, nargs="+", required=True)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.set_defaults(func=cmd_verify)

    sp = add("gen", help="write a random instance to a file")
    sp.add_argument("kind", choices=("matrix", "symmetric", "graph", "empty"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--p", type=float, default=0.5, help="edge probability for graphs")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_gen)
    return p


def _check_args(parser, args):
    if args.command == "ham" and args.matrix and args.delta is None:
        parser.error("ham --matrix needs --delta")
    if args.command == "separate":
        for name in ("epsilon", "gamma"):
            v = getattr(args, name)
            if not 0 < v < 1:
                parser.error(f"--{name} must lie in (0, 1), got {v}")
    if args.command == "verify" and args.trials < 1:
        parser.error("--trials must be >= 1")
    if args.command == "gen" and args.n < 1:
        parser.error("--n must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_args(parser, args)
    try:
        out, text, code = args.func(args)
    except (DensePFError, OSError) as exc:
        print(f"densepf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(dumps(out) if args.output == "json" else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
