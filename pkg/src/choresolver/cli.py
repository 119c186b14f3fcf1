"""Command-line front end.

Subcommands: ``solve``, ``verify``, ``oracle``, ``gen``, ``pof``,
``bench``.  Every invocation writes exactly one JSON document to stdout;
logs and the resolved configuration go to stderr.  Exit codes: 0 success,
2 a ``verify`` criterion failed, 3 an enumeration budget was exceeded,
64 usage error, 1 anything else.

The environment variable ``CHORESOLVER_BUDGET`` overrides the default
oracle/enumeration budgets.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import pof as pof_mod
from .algorithms import ALGORITHMS, _solve_general_traced
from .errors import BudgetExceeded, ChoresolverError
from .fairness import check_envy, check_propx
from .generators import FAMILIES, FamilySpec, gen, gen_random
from .instance import (
    Instance,
    format_rational,
    load_allocation,
    load_instance,
    optimal_allocation,
    parse_rational,
    social_cost,
)
from .oracles import (
    DEFAULT_APS_MAX_ITEMS,
    DEFAULT_MMS_BUDGET,
    aps_lower_bound,
    exact_aps,
    exact_mms,
    mms_lower_bound,
    OracleValue,
)

USAGE_EXIT = 64
VERIFY_FAIL_EXIT = 2
BUDGET_EXIT = 3

ALG_FLAGS = {
    "envy-cycle": "envy_cycle",
    "bid-and-take": "bid_and_take",
    "ordinal": "ordinal",
    "ordinal-weighted": "ordinal_weighted",
}

CRITERIA = ("ef", "ef1", "efx", "prop", "prop1", "propx", "wpropx")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _log_config(args: argparse.Namespace) -> None:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    print("config: " + json.dumps(config, default=str), file=sys.stderr)


def _default_budget() -> int:
    raw = os.environ.get("CHORESOLVER_BUDGET")
    return int(raw) if raw else DEFAULT_MMS_BUDGET


def _read_instance(path: str) -> Instance:
    return load_instance(Path(path).read_bytes())


# -- solve ---------------------------------------------------------------

def _cmd_solve(args) -> int:
    inst = _read_instance(args.input)
    alloc, trace = _solve_general_traced(
        inst, ALG_FLAGS[args.alg], assert_invariants=args.assert_invariants
    )
    if args.trace:
        Path(args.trace).write_text(trace.to_json())
    doc = alloc.to_json_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2))
    _emit(doc)
    return 0


# -- verify --------------------------------------------------------------

def _run_criterion(inst: Instance, alloc, name: str):
    if name in ("ef", "ef1", "efx"):
        mode = {"ef": "none", "ef1": "one", "efx": "any"}[name]
        return check_envy(inst, alloc, up_to=mode)
    mode = {"prop": "none", "prop1": "one", "propx": "any", "wpropx": "any"}[name]
    return check_propx(inst, alloc, up_to=mode)


def _cmd_verify(args) -> int:
    inst = _read_instance(args.input)
    alloc = load_allocation(Path(args.alloc).read_bytes())
    names = [c.strip() for c in args.criteria.split(",") if c.strip()]
    for name in names:
        if name not in CRITERIA:
            raise ChoresolverError(
                f"unknown criterion {name!r}; expected one of {CRITERIA}"
            )
    reports = [_run_criterion(inst, alloc, name) for name in names]
    doc = {"reports": [r.to_json_dict() for r in reports]}
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2))
    _emit(doc)
    return 0 if all(r.holds for r in reports) else VERIFY_FAIL_EXIT


# -- oracle --------------------------------------------------------------

def _cmd_oracle(args) -> int:
    inst = _read_instance(args.input)
    agents = (
        range(inst.n) if args.agent == "all" else [int(args.agent)]
    )
    budget = args.budget if args.budget is not None else _default_budget()
    values: list[OracleValue] = []
    for i in agents:
        if args.compute in ("mms", "both"):
            values.append(exact_mms(inst, i, budget=budget))
            values.append(OracleValue(i, "MMS_LB", mms_lower_bound(inst, i)))
        if args.compute in ("aps", "both"):
            values.append(exact_aps(inst, i, max_items=args.max_aps_items))
            values.append(OracleValue(i, "APS_LB", aps_lower_bound(inst, i)))
    doc = {"values": [v.to_json_dict() for v in values]}
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=2))
    _emit(doc)
    return 0


# -- gen -----------------------------------------------------------------

def _cmd_gen(args) -> int:
    spec = FamilySpec(
        family=args.family,
        n=args.n,
        m=args.m,
        eps=parse_rational(args.eps) if args.eps else None,
        seed=args.seed,
        weight_mode=args.weight_mode,
        completion=args.completion,
    )
    inst = gen(spec)
    # family tables are emitted raw and normalized at load time
    doc = inst.to_json_dict(normalize_flag=spec.family != "random")
    doc["note"] = spec.note
    text = json.dumps(doc, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return 0


# -- pof -----------------------------------------------------------------

def _parse_range(spec: str) -> tuple[str, list[int]]:
    key, _, span = spec.partition("=")
    lo, _, hi = span.partition("..")
    if not hi:
        raise ChoresolverError(f"bad range {spec!r}; expected key=lo..hi")
    return key, list(range(int(lo), int(hi) + 1))


def _pof_instances(args):
    if args.range:
        key, values = _parse_range(args.range)
    elif args.family == "pof_weighted":
        key, values = "eps", [0]
    elif args.family == "pof_weighted_ido":
        key, values = "m", [args.m or 8]
    else:
        key, values = "n", [args.n or 4]
    for v in values:
        if args.family == "pof_weighted":
            eps = parse_rational(args.eps) if args.eps else Fraction(1, 10)
            spec = FamilySpec(family=args.family, eps=eps)
            params = f"eps={format_rational(eps)}"
        elif key == "m" or args.family == "pof_weighted_ido":
            spec = FamilySpec(family=args.family, m=v)
            params = f"m={v}"
        else:
            spec = FamilySpec(family=args.family, n=v)
            params = f"n={v}"
        yield params, gen(spec, normalized=True)


def _cmd_pof(args) -> int:
    budget = args.budget if args.budget is not None else _default_budget()
    records = []
    for params, inst in _pof_instances(args):
        rec = pof_mod.pof_ratio(
            inst, ALG_FLAGS[args.alg], family=args.family, params=params
        )
        if args.certify:
            notion = "WPROPX" if "weighted" in args.family else "PROPX"
            fair_min, _ = pof_mod.min_fair_social_cost(
                inst, notion, budget=budget
            )
            rec = pof_mod.ExperimentRecord(
                family=rec.family,
                params=rec.params,
                n=rec.n,
                m=rec.m,
                algo=rec.algo,
                social_cost=rec.social_cost,
                opt=rec.opt,
                ratio=rec.ratio,
                certified_min_fair_cost=fair_min,
            )
        records.append(rec)
    out = Path(args.out)
    pof_mod.write_records_csv(records, out)
    figure = out.with_suffix(".png")
    pof_mod.render_records_figure(records, figure)
    _emit({
        "csv": str(out),
        "figure": str(figure),
        "records": len(records),
        "max_ratio": format_rational(max(r.ratio for r in records)),
    })
    return 0


# -- bench ---------------------------------------------------------------

def _cmd_bench(args) -> int:
    _, n_values = _parse_range(args.n_range)
    _, m_values = _parse_range(args.m_range)
    algos = (
        list(ALG_FLAGS.values()) if args.algs == "all"
        else [ALG_FLAGS[a] for a in args.algs.split(",")]
    )
    rows = []
    counter = 0
    for n in n_values:
        for m in m_values:
            for k in range(args.seeds):
                seed = args.seed + counter
                counter += 1
                inst = gen_random(n, m, seed, weight_mode=args.weight_mode)
                work = inst.normalized()
                opt, _ = optimal_allocation(work)
                for algo in algos:
                    from .algorithms import solve_general

                    t0 = time.perf_counter()
                    alloc = solve_general(work, algo)
                    elapsed = (time.perf_counter() - t0) * 1000
                    report = check_propx(work, alloc, up_to="any")
                    sc = social_cost(work, alloc)
                    ratio = sc / opt if opt > 0 else Fraction(0)
                    rows.append([
                        algo, n, m, seed,
                        "" if report.overall_alpha is None
                        else format_rational(report.overall_alpha),
                        format_rational(sc),
                        format_rational(opt),
                        format_rational(ratio),
                        float(ratio),
                        round(elapsed, 3),
                    ])
    import csv as csv_mod

    out = Path(args.out)
    with open(out, "w", newline="") as fh:
        writer = csv_mod.writer(fh)
        writer.writerow([
            "algo", "n", "m", "seed", "alpha",
            "sc", "opt", "ratio", "ratio_float", "time_ms",
        ])
        writer.writerows(rows)

    figure = out.with_suffix(".png")
    if rows:
        from .plots import new_figure, save_figure

        fig, ax = new_figure()
        for algo in algos:
            points: dict[int, list[float]] = {}
            for row in rows:
                if row[0] == algo:
                    points.setdefault(row[2], []).append(row[9])
            ms = sorted(points)
            ax.plot(
                ms,
                [sum(points[m]) / len(points[m]) for m in ms],
                marker="o",
                label=algo,
            )
        ax.set_xlabel("items")
        ax.set_ylabel("mean wall time (ms)")
        ax.legend(fontsize=8)
        save_figure(fig, figure)

    _emit({
        "csv": str(out),
        "figure": str(figure) if rows else None,
        "records": len(rows),
    })
    return 0


# -- wiring --------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="choresolver", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run an allocation algorithm")
    p.add_argument("--alg", required=True, choices=sorted(ALG_FLAGS))
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--trace", help="write the event trace to this path")
    p.add_argument("--assert-invariants", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check fairness criteria")
    p.add_argument("--criteria", required=True,
                   help="comma-separated: " + ",".join(CRITERIA))
    p.add_argument("--input", required=True)
    p.add_argument("--alloc", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("oracle", help="exact MMS/APS share oracles")
    p.add_argument("--compute", required=True, choices=["mms", "aps", "both"])
    p.add_argument("--agent", default="all")
    p.add_argument("--budget", type=int, default=None,
                   help="cap on n^m partition evaluations for MMS")
    p.add_argument("--max-aps-items", type=int, default=DEFAULT_APS_MAX_ITEMS)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gen", help="generate a named instance family")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--eps", help='rational like "1/10"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weight-mode", default="uniform",
                   choices=["uniform", "dirichlet-like-rational"])
    p.add_argument("--completion", choices=["spike", "uniform"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("pof", help="price-of-fairness report (CSV + figure)")
    p.add_argument("--family", required=True,
                   choices=["pof_unweighted", "pof_weighted", "pof_weighted_ido"])
    p.add_argument("--range", help="sweep like n=2..6 or m=4..10")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--eps", help='rational like "1/10"')
    p.add_argument("--alg", default="bid-and-take", choices=sorted(ALG_FLAGS))
    p.add_argument("--certify", action="store_true",
                   help="enumerate the cheapest fair allocation")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_pof)

    p = sub.add_parser("bench", help="seeded sweep with wall-time statistics")
    p.add_argument("--n-range", default="n=2..5")
    p.add_argument("--m-range", default="m=4..10")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algs", default="all")
    p.add_argument("--weight-mode", default="uniform",
                   choices=["uniform", "dirichlet-like-rational"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _log_config(args)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        _emit({"error": "BudgetExceeded", "message": str(exc)})
        return BUDGET_EXIT
    except ChoresolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


def main() -> None:
    sys.exit(run())
