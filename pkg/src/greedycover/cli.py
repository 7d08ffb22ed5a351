"""Command-line front end.

Exit codes: 0 success, 1 infeasible output or violated bound, 2 bad input
or failed validation.
"""

from __future__ import annotations

import argparse
import glob
import sys
import time
from fractions import Fraction

from .errors import BudgetExceeded, DualUnbounded, GreedyCoverError, InstanceError, LatticeError
from .formats import LoadedInstance, dumps, read_instance, run_to_json
from .generators import FAMILIES, generate
from .oracle import DEFAULT_ORACLE_BUDGET, approximation_ratio, exact_opt
from .product import check_product_feasibility, product_certificate, revised_solve, witness_cover_diagnostics
from .rational import approx, format_rational
from .solver import check_feasibility, solve
from .system import validate_greedy_properties

OK, INFEASIBLE, BAD_INPUT = 0, 1, 2


def _label(names, row) -> str:
    key = getattr(row, "s", row)
    body = "{" + ",".join(names[e] for e in sorted(key)) + "}"
    if hasattr(row, "u"):
        return f"(U{row.u}, {body})"
    return body


def _q(v) -> str:
    if v is None:
        return "-"
    v = Fraction(v)
    text = format_rational(v)
    return text if v.denominator == 1 or "." in text else f"{text} (~{approx(v)})"


def run_instance(loaded: LoadedInstance, cleanup: bool = True, raw_matrix: bool = False):
    """Solve with the right algorithm; returns ``(run, certificate, report)``."""
    system = loaded.system
    if loaded.is_product:
        run = revised_solve(system, cleanup=cleanup, raw_matrix=raw_matrix)
        report = witness_cover_diagnostics(system, run)
        cert = product_certificate(system, run, report)
        return run, cert, report
    run = solve(system, raw_matrix=raw_matrix)
    return run, run.certificate, None


def feasibility(loaded: LoadedInstance, x):
    if loaded.is_product:
        return check_product_feasibility(loaded.system, x)
    return check_feasibility(loaded.system, x)


def _print_run(loaded, run, cert, report, show_cert):
    names = run.names
    print(f"adapter      {loaded.adapter} ({loaded.format}), |E| = {len(run.x)}")
    print("x            " + (" ".join(f"{names[e]}={v}" for e, v in enumerate(run.x) if v) or "(all zero)"))
    if hasattr(run, "x_before_cleanup") and tuple(run.x_before_cleanup) != tuple(run.x):
        print("before clean " + " ".join(f"{names[e]}={v}" for e, v in enumerate(run.x_before_cleanup) if v))
    print(f"primal cost  {_q(run.primal_cost)}")
    print(f"dual value   {_q(run.dual_value)}")
    print(f"chain        {len(run.chain)} step(s): " + " ".join(names[e] for e in run.chain.bottlenecks))
    if show_cert and cert is not None:
        if hasattr(cert, "b"):
            print(f"certificate  rho={_q(cert.rho)} delta_eff={_q(cert.delta_effective)} b={cert.b} a={cert.a} guarantee={_q(cert.guarantee)}")
        else:
            print(
                f"certificate  rho={_q(cert.rho)} delta_eff={_q(cert.delta_effective)} k_observed={_q(cert.k_observed)}"
                f" binary={cert.binary} guarantee={_q(cert.guarantee)}"
            )


def cmd_solve(args) -> int:
    loaded = read_instance(args.instance)
    try:
        run, cert, report = run_instance(loaded, cleanup=not args.no_cleanup, raw_matrix=args.raw_matrix)
    except DualUnbounded as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return INFEASIBLE
    ok, row = feasibility(loaded, run.x)
    opt = None
    if args.compare:
        opt = exact_opt(loaded.system, budget=args.budget or DEFAULT_ORACLE_BUDGET)
    if args.json:
        doc = run_to_json(run, cert, report)
        doc["feasible"] = ok
        if not ok:
            doc["violated_row"] = _label(run.names, row)
        if opt is not None:
            doc["oracle"] = {"opt": None if opt.opt_value is None else format_rational(opt.opt_value), "nodes": opt.nodes_enumerated}
            if ok and opt.feasible:
                doc["oracle"]["ratio"] = format_rational(approximation_ratio(run, opt))
        print(dumps(doc), end="")
    else:
        _print_run(loaded, run, cert, report, args.certificate)
        if opt is not None:
            print(f"oracle opt   {_q(opt.opt_value)} ({opt.nodes_enumerated} nodes)")
            if ok and opt.feasible:
                print(f"ratio        {_q(approximation_ratio(run, opt))}")
        print("feasible     yes" if ok else f"feasible     NO, violated row {_label(run.names, row)}")
    return OK if ok else INFEASIBLE


def _validate_report(loaded: LoadedInstance, budget: int):
    system = loaded.system
    if loaded.is_product:
        reports = []
        for u in range(len(system.ufamily)):
            rep = validate_greedy_properties(system.subsystem(u), budget=budget)
            reports.append((u, rep))
        return reports
    return [(None, validate_greedy_properties(system, budget=budget))]


def cmd_validate(args) -> int:
    loaded = read_instance(args.instance)
    budget = args.budget if args.budget is not None else 10**7
    try:
        reports = _validate_report(loaded, budget)
    except BudgetExceeded as exc:
        print(f"cannot validate exhaustively: {exc}", file=sys.stderr)
        return BAD_INPUT
    bad = [(u, rep) for u, rep in reports if not rep.ok]
    names = loaded.system.names
    if args.json:
        doc = {
            "ok": not bad,
            "violations": [
                {
                    "member": u,
                    "property": v.tag,
                    "element": None if v.element is None else names[v.element],
                    "rows": [sorted(names[e] for e in r) for r in v.rows],
                    "values": [format_rational(x) for x in v.values],
                    "message": v.message,
                }
                for u, rep in bad
                for v in rep.violations
            ],
        }
        print(dumps(doc), end="")
    elif not bad:
        print(f"ok: {loaded.adapter} instance satisfies P1-P4")
    else:
        for u, rep in bad:
            prefix = "" if u is None else f"member U{u}: "
            tags = ", ".join(sorted(rep.tags()))
            print(f"{prefix}{len(rep.violations)} violation(s) [{tags}]")
            print(f"  first: {rep.first().describe(names)}")
    return OK if not bad else BAD_INPUT


def _bound(loaded, cert):
    declared = loaded.declared_bound
    if declared is not None:
        return declared
    if cert is None:
        return None
    return cert.guarantee


def compare_one(path, budget):
    loaded = read_instance(path)
    start = time.perf_counter()
    run, cert, _ = run_instance(loaded)
    ok, _ = feasibility(loaded, run.x)
    opt = exact_opt(loaded.system, budget=budget)
    ratio = approximation_ratio(run, opt) if opt.feasible else None
    bound = _bound(loaded, cert)
    violated = (not ok) or (ratio is not None and bound is not None and ratio > bound)
    return {
        "instance": str(path),
        "adapter": loaded.adapter,
        "n": len(run.x),
        "cost": run.primal_cost,
        "dual": run.dual_value,
        "opt": opt.opt_value,
        "ratio": ratio,
        "bound": bound,
        "rho": cert.rho if cert else None,
        "delta_eff": cert.delta_effective if cert else None,
        "b": getattr(cert, "b", None),
        "a": getattr(cert, "a", None),
        "k_observed": getattr(cert, "k_observed", None),
        "seconds": time.perf_counter() - start,
        "feasible": ok,
        "violated": violated,
    }


def cmd_compare(args) -> int:
    paths = []
    for pattern in args.instances:
        found = sorted(glob.glob(pattern))
        paths.extend(found if found else [pattern])
    if not paths:
        print("no instances", file=sys.stderr)
        return BAD_INPUT
    budget = args.budget if args.budget is not None else DEFAULT_ORACLE_BUDGET
    rows = [compare_one(p, budget) for p in paths]
    if args.json:
        doc = []
        for r in rows:
            d = dict(r)
            for key in ("cost", "dual", "opt", "ratio", "bound", "rho", "delta_eff", "k_observed"):
                d[key] = None if d[key] is None else format_rational(d[key])
            d["seconds"] = round(d["seconds"], 4)
            doc.append(d)
        print(dumps({"rows": doc}), end="")
    else:
        header = f"{'instance':<32} {'adapter':<13} {'|E|':>3} {'cost':>8} {'dual':>10} {'opt':>8} {'ratio':>10} {'bound':>6}  certificate"
        print(header)
        for r in rows:
            if r["b"] is not None:
                cert = f"rho={_q(r['rho'])} delta={_q(r['delta_eff'])} b={r['b']} a={r['a']}"
            else:
                cert = f"rho={_q(r['rho'])} delta={_q(r['delta_eff'])} k={_q(r['k_observed'])}"
            flag = "  VIOLATION" if r["violated"] else ""
            print(
                f"{r['instance'][-32:]:<32} {r['adapter']:<13} {r['n']:>3} {format_rational(r['cost']):>8} "
                f"{format_rational(r['dual']):>10} {_short(r['opt']):>8} {_short(r['ratio']):>10} {_short(r['bound']):>6}  {cert}{flag}"
            )
    return INFEASIBLE if any(r["violated"] for r in rows) else OK


def _short(v) -> str:
    return "-" if v is None else approx(v, 3) if Fraction(v).denominator != 1 else str(Fraction(v).numerator)


def cmd_gen(args) -> int:
    options = {}
    if args.variant:
        options["variant"] = args.variant
    if args.lines:
        options["lines"] = args.lines
    if args.m is not None:
        options["m"] = args.m
    doc = generate(args.family, args.size, seed=args.seed, **options)
    text = dumps(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return OK


def cmd_oracle(args) -> int:
    loaded = read_instance(args.instance)
    budget = args.budget if args.budget is not None else DEFAULT_ORACLE_BUDGET
    res = exact_opt(loaded.system, budget=budget)
    names = loaded.system.names
    if args.json:
        doc = {
            "opt_value": None if res.opt_value is None else format_rational(res.opt_value),
            "argmin": None if res.argmin is None else {names[e]: v for e, v in enumerate(res.argmin)},
            "nodes_enumerated": res.nodes_enumerated,
        }
        print(dumps(doc), end="")
    elif res.feasible:
        print(f"opt          {_q(res.opt_value)}")
        print("argmin       " + (" ".join(f"{names[e]}={v}" for e, v in enumerate(res.argmin) if v) or "(all zero)"))
        print(f"nodes        {res.nodes_enumerated}")
    else:
        print("infeasible")
    return OK if res.feasible else INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=None, help="work budget for exhaustive scans")
    common.add_argument("--seed", type=int, default=0, help="seed for generators")
    common.add_argument("--no-cleanup", action="store_true", help="skip the cleanup pass of the product algorithm")
    common.add_argument("--raw-matrix", action="store_true", help="run on the untruncated matrix (debugging)")

    parser = argparse.ArgumentParser(prog="greedycover", description="Primal-dual greedy covering solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve an instance")
    p.add_argument("instance")
    p.add_argument("--certificate", action="store_true", help="print the slackness certificate")
    p.add_argument("--compare", action="store_true", help="also run the exact oracle")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", parents=[common], help="check P1-P4 exhaustively")
    p.add_argument("instance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compare", parents=[common], help="greedy vs oracle table")
    p.add_argument("instances", nargs="+", help="files or glob patterns")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("size", type=int, nargs="?")
    p.add_argument("--variant", choices=["plain", "multi", "marginal"])
    p.add_argument("--lines", type=int, choices=[1, 2])
    p.add_argument("--m", type=int, default=None, help="M for baddual (default n-1)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", parents=[common], help="exact optimum by enumeration")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, LatticeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except DualUnbounded as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return INFEASIBLE
    except GreedyCoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
