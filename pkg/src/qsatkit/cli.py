"""Command-line frontend and experiment drivers.

Subcommands wrap the library one-to-one: ``gen`` (instance files),
``peel``, ``dimer``, ``solve`` (the full product-state pipeline),
``groebner`` (exact certification), ``kernel``, ``mv``, ``patterns``,
``thresholds`` and ``fig3`` (the square-ensemble classification sweep).

Exit codes: 0 success, 2 certified no-covering / unsatisfiable, 1 any
error (including malformed flags).  All randomness derives from --seed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import sys
import time

import numpy as np

from . import io as qio
from .errors import NotZeroDimensionalError, QsatError, ResourceLimitError
from .graph import (count_dimer_coverings, estimate_thresholds,
                    leaf_removal, sample_graph)
from .groebner import format_polynomial, is_unsat, parse_polynomial, solve_lex
from .homotopy import prodsat_solve
from .instance import (Instance, ProductState, kernel_dimension,
                       random_instance)
from .patterns import make_pattern, verify_pattern
from .polysystem import build_equations
from .polytope import bkk_bound, mixed_volume, newton_polytope


class _Parser(argparse.ArgumentParser):
    # exit code 1 on malformed flags (2 is reserved for certified outcomes)
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _load_or_sample(args):
    if getattr(args, "infile", None):
        return qio.read_instance(args.infile)
    m = args.m if args.m is not None else int(round(args.alpha * args.n))
    g = sample_graph(args.n, m, args.k, args.seed)
    return random_instance(g, args.seed, args.mode, args.denom_bound)


def _gen_flags(sub, need_out=False):
    sub.add_argument("--k", type=int, default=3)
    sub.add_argument("--n", type=int, default=100)
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--alpha", type=float, default=0.8)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--mode", choices=["float", "exact"], default="float")
    sub.add_argument("--denom-bound", type=int, default=64)
    sub.add_argument("--in", dest="infile", default=None,
                     help="read an instance file instead of sampling")
    sub.add_argument("--out", default=None if not need_out else None)


def graph_hash(g):
    blob = json.dumps({"k": g.k, "n": g.n_vars, "clauses": [list(c) for c in g.clauses]},
                      sort_keys=True).encode()
    return hashlib.sha1(blob).hexdigest()[:12]


def prodspan_dimension(solutions, inst, rtol=1e-9, cap=12):
    """Numerical rank of the span of the given product states as vectors in
    the full 2^N space (singular values above rtol * largest)."""
    n = inst.graph.n_vars
    if n > cap:
        raise ResourceLimitError(f"product-span rank capped at N <= {cap}", n=n)
    if not solutions:
        return 0
    mat = np.stack([s.full_vector() for s in solutions])
    svals = np.linalg.svd(mat, compute_uv=False)
    if svals[0] == 0:
        return 0
    return int(np.sum(svals > rtol * svals[0]))


# ---------------------------------------------------------------------------
# subcommand bodies


def cmd_gen(args):
    inst = _load_or_sample(args)
    if args.out:
        qio.write_instance(inst, args.out)
    else:
        json.dump(qio.instance_to_dict(inst), sys.stdout, indent=1)
        print()
    return 0


def cmd_peel(args):
    inst = _load_or_sample(args)
    res = leaf_removal(inst.graph)
    doc = {
        "n": inst.graph.n_vars, "m": inst.graph.m,
        "core_vars": res.core.n_vars, "core_clauses": res.core.m,
        "removed": len(res.removal_list),
        "core_empty": res.core_is_empty,
        "core_fraction": res.core.n_vars / max(inst.graph.n_vars, 1),
    }
    out, close = _open_out(args.out)
    json.dump(doc, out, indent=1)
    out.write("\n")
    if close:
        out.close()
    return 0


def cmd_dimer(args):
    if args.kind:
        g = make_pattern(args.kind, args.k, args.m if args.m is not None else 2)
    else:
        g = _load_or_sample(args).graph
    count = count_dimer_coverings(g, node_budget=args.budget)
    out, close = _open_out(args.out)
    print(count, file=out)
    if close:
        out.close()
    return 0


def cmd_solve(args):
    inst = _load_or_sample(args)
    result = prodsat_solve(inst, seed=args.seed, tol=args.tol)
    if not result.solved:
        cert = {
            "outcome": "no-covering",
            "clause_set": list(result.certificate.clause_set),
            "neighborhood": list(result.certificate.neighborhood),
            "core_clauses": result.core_size[0],
            "core_vars": result.core_size[1],
        }
        out, close = _open_out(args.out)
        json.dump(cert, out, indent=1)
        out.write("\n")
        if close:
            out.close()
        return 2
    if args.out:
        qio.write_state(result.state, args.out, result.residuals)
    report = {
        "outcome": "solved",
        "max_residual": max(result.residuals),
        "core_clauses": result.core_size[0],
        "core_vars": result.core_size[1],
    }
    json.dump(report, sys.stdout, indent=1)
    print()
    return 0


def cmd_groebner(args):
    inst = _load_or_sample(args)
    if inst.mode != "exact":
        raise QsatError("groebner certification needs an exact-mode instance")
    res = leaf_removal(inst.graph)
    if res.core_is_empty:
        print(json.dumps({"core_empty": True, "unsat": False}))
        return 0
    core_inst = Instance(res.core,
                         tuple(inst.projectors[j] for j in res.clause_map),
                         "exact")
    system = build_equations(core_inst)
    if args.dump:
        for p in system.polys:
            print(format_polynomial(p))
    unsat = is_unsat(list(system.polys))
    doc = {"core_empty": False, "core_vars": res.core.n_vars,
           "core_clauses": res.core.m, "unsat": bool(unsat)}
    if not unsat and args.solve and system.nvars <= 5:
        roots = solve_lex(list(system.polys))
        doc["roots"] = [[[z.real, z.imag] for z in root] for root in roots]
    print(json.dumps(doc, indent=1))
    return 2 if unsat else 0


def cmd_kernel(args):
    inst = _load_or_sample(args)
    dim = kernel_dimension(inst, tol=args.tol)
    print(dim)
    return 0


def cmd_mv(args):
    if args.system:
        with open(args.system) as fh:
            lines = [ln.strip() for ln in fh
                     if ln.strip() and not ln.strip().startswith("#")]
        nvars = len(lines)
        polys = [parse_polynomial(ln, nvars) for ln in lines]
        mv = mixed_volume([newton_polytope(p) for p in polys])
    else:
        inst = _load_or_sample(args)
        mv = bkk_bound(build_equations(inst))
    print(int(mv) if getattr(mv, "denominator", 1) == 1 else mv)
    return 0


def _emit_table(rows, header, args):
    out, close = _open_out(args.out)
    if getattr(args, "format", "csv") == "json":
        json.dump([dict(zip(header, row)) for row in rows], out, indent=1)
        out.write("\n")
    else:
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)
    if close:
        out.close()


def cmd_patterns(args):
    kinds = args.kind.split(",") if args.kind else \
        ["sunflower", "loose_chain", "loose_cycle", "strong_chain", "strong_cycle"]
    ms = [int(x) for x in args.m_list.split(",")] if args.m_list else [args.m or 2]
    rows = []
    for kind in kinds:
        for m in ms:
            rep = verify_pattern(kind, m, k=args.k,
                                 seeds=tuple(args.seed + i for i in range(args.trials)))
            rows.append([rep["kind"], rep["m"], rep["n_vars"],
                         ";".join(map(str, rep["generic_dim"])),
                         ";".join(map(str, rep["separable_dim"])),
                         rep["recurrence_dim"], rep["dimers"],
                         rep["recurrence_dimers"],
                         int(rep["dim_match"]), int(rep["dimer_match"])])
    _emit_table(rows, ["kind", "m", "n_vars", "generic_dim", "separable_dim",
                       "recurrence_dim", "dimers", "recurrence_dimers",
                       "dim_match", "dimer_match"], args)
    return 0


def cmd_thresholds(args):
    alphas = [float(a) for a in args.alphas.split(",")]
    rows = estimate_thresholds(args.k, args.n, alphas, args.trials, args.seed)
    _emit_table([[r.alpha, r.empty_core_freq, r.covering_freq,
                  r.mean_core_fraction, r.core_fraction_se] for r in rows],
                ["alpha", "empty_core_freq", "cover_freq",
                 "mean_core_frac", "se"], args)
    return 0


# ---------------------------------------------------------------------------
# fig3 sweep


def enumerate_square_graphs(n, k=3):
    """All interaction graphs with m = n distinct clause supports."""
    supports = list(itertools.combinations(range(n), k))
    for combo in itertools.combinations(range(len(supports)), n):
        yield tuple(supports[i] for i in combo)


def count_square_graphs(n, k=3):
    from math import comb
    return comb(comb(n, k), n)


def fig3_classify_instance(graph, seed, denom_bound=40, with_prod=True,
                           budget_sec=None):
    """(dim_ker, mv, dim_prod_or_None, class_label) for one square graph."""
    from .graph import FactorGraph

    n = len(graph)
    g = FactorGraph(3, n, tuple(graph))
    inst = random_instance(g, seed, "exact", denom_bound)
    dim_ker = kernel_dimension(inst.to_float())
    system = build_equations(inst)
    mv = bkk_bound(system)
    dim_prod = None
    if with_prod:
        deadline = time.monotonic() + budget_sec if budget_sec else None
        try:
            roots = solve_lex(list(system.polys),
                              **({"deadline": deadline} if deadline else {}))
            states = []
            for z in roots:
                qubits = np.stack([np.ones(n, dtype=complex), z], axis=1)
                states.append(ProductState(qubits))
            dim_prod = prodspan_dimension(states, inst)
        except NotZeroDimensionalError:
            dim_prod = None
    if dim_ker == 0:
        label = "unsat"
    elif mv == 0:
        label = "entsat_evidence"
    elif mv < dim_ker:
        label = "mv_lt_ker"
    elif mv == dim_ker:
        label = "mv_eq_ker"
    else:
        label = "mv_gt_ker"
    return dim_ker, mv, dim_prod, label


def fig3_sweep(n, trials, seed, denom_bound=40, budget_sec=None):
    """Classification rows for the square ensemble at N = M = n, k = 3.
    ``trials`` is "all" (exhaustive over distinct support sets) or a count
    of uniformly sampled graphs.  Per-instance over-budget runs are flagged
    as skipped and excluded from fractions."""
    graphs = []
    if trials == "all":
        graphs = list(enumerate_square_graphs(n))
    else:
        supports = list(itertools.combinations(range(n), 3))
        rng = np.random.default_rng(seed)
        seen = set()
        while len(graphs) < int(trials):
            combo = tuple(sorted(rng.choice(len(supports), size=n, replace=False).tolist()))
            if combo in seen:
                continue
            seen.add(combo)
            graphs.append(tuple(supports[i] for i in combo))
    rows = []
    for idx, graph in enumerate(graphs):
        from .graph import FactorGraph as FG
        g = FG(3, n, tuple(graph))
        try:
            dim_ker, mv, dim_prod, label = fig3_classify_instance(
                graph, np.random.SeedSequence([int(seed), idx]).generate_state(1)[0],
                denom_bound=denom_bound, with_prod=(n <= 6),
                budget_sec=budget_sec)
        except ResourceLimitError:
            rows.append({"instance_id": idx, "graph_hash": graph_hash(g),
                         "dim_ker": "", "mv": "", "dim_prod": "",
                         "class": "skipped"})
            continue
        rows.append({"instance_id": idx, "graph_hash": graph_hash(g),
                     "dim_ker": dim_ker, "mv": mv,
                     "dim_prod": "" if dim_prod is None else dim_prod,
                     "class": label})
    return rows


def fig3_fractions(rows):
    counted = [r for r in rows if r["class"] != "skipped"]
    total = len(counted)
    out = {"instances": total, "skipped": len(rows) - total}
    for label in ("mv_lt_ker", "mv_eq_ker", "mv_gt_ker", "entsat_evidence", "unsat"):
        out[label] = sum(1 for r in counted if r["class"] == label) / total if total else 0.0
    return out


def cmd_fig3(args):
    trials = "all" if args.trials == "all" else int(args.trials)
    rows = fig3_sweep(args.n, trials, args.seed, denom_bound=args.denom_bound,
                      budget_sec=args.budget_sec)
    _emit_table([[r["instance_id"], r["graph_hash"], r["dim_ker"], r["mv"],
                  r["dim_prod"], r["class"]] for r in rows],
                ["instance_id", "graph_hash", "dim_ker", "mv", "dim_prod",
                 "class"], args)
    print(json.dumps(fig3_fractions(rows)), file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="qsatkit",
                     description="random k-QSAT product-state toolkit")
    subs = parser.add_subparsers(dest="cmd", required=True)

    sub = subs.add_parser("gen", help="sample an instance and write it")
    _gen_flags(sub)
    sub.set_defaults(fn=cmd_gen)

    sub = subs.add_parser("peel", help="leaf removal summary")
    _gen_flags(sub)
    sub.set_defaults(fn=cmd_peel)

    sub = subs.add_parser("dimer", help="count dimer coverings")
    _gen_flags(sub)
    sub.add_argument("--kind", default=None, help="pattern family instead of instance")
    sub.add_argument("--budget", type=int, default=10 ** 8)
    sub.set_defaults(fn=cmd_dimer)

    sub = subs.add_parser("solve", help="find a zero-energy product state")
    _gen_flags(sub)
    sub.add_argument("--tol", type=float, default=1e-8)
    sub.set_defaults(fn=cmd_solve)

    sub = subs.add_parser("groebner", help="exact core certification")
    _gen_flags(sub)
    sub.add_argument("--dump", action="store_true")
    sub.add_argument("--solve", action="store_true")
    sub.set_defaults(fn=cmd_groebner, mode="exact")

    sub = subs.add_parser("kernel", help="kernel dimension")
    _gen_flags(sub)
    sub.add_argument("--tol", type=float, default=1e-9)
    sub.set_defaults(fn=cmd_kernel)

    sub = subs.add_parser("mv", help="mixed volume / BKK bound")
    _gen_flags(sub)
    sub.add_argument("--system", default=None,
                     help="text file with one polynomial per line")
    sub.set_defaults(fn=cmd_mv)

    sub = subs.add_parser("patterns", help="pattern verification table")
    sub.add_argument("--kind", default=None)
    sub.add_argument("--k", type=int, default=3)
    sub.add_argument("--m", type=int, default=None)
    sub.add_argument("--m-list", default=None)
    sub.add_argument("--seed", type=int, default=101)
    sub.add_argument("--trials", type=int, default=1)
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.set_defaults(fn=cmd_patterns)

    sub = subs.add_parser("thresholds", help="Monte Carlo threshold table")
    sub.add_argument("--k", type=int, default=3)
    sub.add_argument("--n", type=int, default=20000)
    sub.add_argument("--alphas", default="0.7,0.85,0.92,0.99")
    sub.add_argument("--trials", type=int, default=100)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.set_defaults(fn=cmd_thresholds)

    sub = subs.add_parser("fig3", help="square-ensemble classification sweep")
    sub.add_argument("--n", type=int, default=5)
    sub.add_argument("--trials", default="all")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--denom-bound", type=int, default=40)
    sub.add_argument("--budget-sec", type=float, default=None)
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.set_defaults(fn=cmd_fig3)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 1
    try:
        return args.fn(args)
    except QsatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
