"""Command-line front end.

Exit codes: 0 success, 2 validation failure or bad input, 3 infeasible,
4 time budget exhausted.

CSV columns
-----------
table2    n, then for each of planar_symmetric, planar_numeric, thomson,
          general_numeric the computed value, the printed reference
          (<col>_ref) and the absolute deviation (<col>_dev); status.
platonic  kind, n, computed, closed_form, reference, dev_closed_form,
          dev_reference.
table1    r, claim, outcome, holds.
bounds    name, at, value, kind.
search    iteration, radius (the running best after each refinement round).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import plotting
from .bloch import dump_json, load_json, load_povm, validate_povm, werner_assemblage
from .bounds import bound_reports, planar_radius_upper
from .constructions import PlatonicKind, ThomsonConfig, platonic, rotsym_planar, thomson
from .errors import CompatError, Infeasible, InvalidPOVM
from .geometry import OracleConfig, sampled_minimum
from .lhs import LHSModel, build_lhs_werner, verify_lhs
from .radius import compat_radius, compat_radius_sym
from .search import SearchConfig, maximize_radius
from .tables import Status, Table2Options, reproduce_platonic, reproduce_table2, table1_thresholds

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4


# -- output helpers ----------------------------------------------------------


def _csv_text(records: list[dict]) -> str:
    buf = io.StringIO()
    if records:
        writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: ("" if v is None else v) for k, v in rec.items()})
    return buf.getvalue()


def _emit(data, records: list[dict], fmt: str) -> None:
    if fmt == "csv":
        sys.stdout.write(_csv_text(records))
    else:
        print(dump_json(data))


def _fmt4(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _print_table(records: list[dict], columns: list[str]) -> None:
    cells = [[_fmt4(r[c]) for c in columns] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    print("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
    for row in cells:
        print("  ".join(v.rjust(w) for v, w in zip(row, widths)))


def _write_report(records: list[dict], out: str | None, plot) -> None:
    """Write the CSV to ``out`` and the figure next to it with a .png suffix."""
    if out is None:
        return
    path = Path(out)
    path.write_text(_csv_text(records), encoding="utf-8")
    if plot is not None:
        plot(path.with_suffix(".png"))


def _load_settings(path: str) -> np.ndarray:
    data = load_json(path)
    if isinstance(data, dict):
        data = data["settings"]
    return np.asarray(data, dtype=float).reshape(-1, 3)


# -- commands ----------------------------------------------------------------


def cmd_validate(args) -> int:
    povm = load_povm(args.povm)
    report = validate_povm(povm, args.tol)
    data = {"valid": report.valid, "violations": [list(v) for v in report.violations]}
    _emit(data, [{"name": k, "magnitude": v} for k, v in report.violations], args.format)
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_radius(args) -> int:
    povm = load_povm(args.povm)
    res = compat_radius_sym(povm) if args.sym else compat_radius(povm)
    data = res.to_dict()
    if args.oracle == "grid":
        val, c0, c = sampled_minimum(povm, OracleConfig(grid_points=args.grid_points, seed=args.seed))
        data["oracle"] = {"value": val, "c0": c0, "c": list(c), "grid_points": args.grid_points}
    rec = {"value": res.value, "witness_c0": res.witness_c0, "method": res.method.value}
    rec.update({f"witness_c{ax}": v for ax, v in zip("xyz", res.witness_c)})
    _emit(data, [rec], args.format)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.family == "rotsym":
        povm = rotsym_planar(args.n)
    elif args.family == "platonic":
        povm = platonic(args.kind)
    else:
        povm = thomson(ThomsonConfig(args.n, restarts=args.restarts, seed=args.seed),
                       repair_weights=not args.equal_weights)
    data = povm.to_dict()
    if args.out:
        dump_json(data, args.out)
    else:
        print(dump_json(data))
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = SearchConfig(args.n, args.planar, args.samples, args.refine, args.seed, args.budget_ms)
    res = maximize_radius(cfg)
    data = res.to_dict()
    if args.out:
        dump_json(data, args.out)
    if args.history:
        records = [{"iteration": i, "radius": r} for i, r in res.history]
        cap = planar_radius_upper(args.n) if args.planar else None
        _write_report(records, args.history, lambda p: plotting.plot_history(res.history, p, cap))
    summary = {"n": args.n, "planar": args.planar, "seed": args.seed, "best_radius": res.best_radius,
               "budget_exhausted": res.budget_exhausted}
    _emit(summary if args.out else data, [summary], args.format)
    return EXIT_BUDGET if res.budget_exhausted else EXIT_OK


def cmd_lhs_build(args) -> int:
    parent = load_povm(args.parent)
    model = build_lhs_werner(parent, args.r, _load_settings(args.settings))
    data = model.to_dict()
    data["r"] = args.r
    if args.out:
        dump_json(data, args.out)
    else:
        print(dump_json(data))
    return EXIT_OK


def cmd_lhs_verify(args) -> int:
    raw = load_json(args.model)
    model = LHSModel.from_dict(raw)
    r = args.r if args.r is not None else raw["r"]
    ok, dev = verify_lhs(model, werner_assemblage(r, model.settings), args.tol)
    data = {"ok": ok, "max_dev": dev, "r": r, "hidden_states": len(model), "settings": len(model.settings)}
    _emit(data, [data], args.format)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_bounds(args) -> int:
    reports = bound_reports(n=args.n, r=args.r)
    records = [b.to_dict() for b in reports]
    _emit(records, records, args.format)
    if args.out:
        _write_report(records, args.out, plotting.plot_cost_bounds)
    return EXIT_OK


def cmd_table2(args) -> int:
    opts = Table2Options(
        seed=args.seed,
        samples=args.samples,
        refine_iters=args.refine,
        time_budget_ms=args.budget_ms,
        restarts=args.restarts,
        n_values=tuple(args.rows),
        search=not args.no_search,
    )
    rows = reproduce_table2(opts)
    records = [r.csv_record() for r in rows]
    if args.format is None:
        _print_table(records, ["n", "planar_symmetric", "planar_numeric", "thomson", "general_numeric", "status"])
    else:
        _emit(records, records, args.format)
    _write_report(records, args.out, lambda p: plotting.plot_table2(rows, p))
    if any(r.budget_exhausted for r in rows):
        return EXIT_BUDGET
    unexpected = [r.n for r in rows if r.status is Status.INFEASIBLE and r.reference("thomson") != "--"]
    return EXIT_INFEASIBLE if unexpected else EXIT_OK


def cmd_platonic(args) -> int:
    rows = reproduce_platonic()
    records = [r.csv_record() for r in rows]
    if args.format is None:
        _print_table(records, ["kind", "n", "computed", "closed_form", "reference", "dev_reference"])
    else:
        _emit(records, records, args.format)
    _write_report(records, args.out, lambda p: plotting.plot_platonic(rows, p))
    return EXIT_OK


def cmd_table1(args) -> int:
    rows = table1_thresholds(seed=args.seed, settings=args.settings)
    records = [r.csv_record() for r in rows]
    if args.format is None:
        _print_table(records, ["r", "claim", "holds", "outcome"])
    elif args.format == "json":
        print(dump_json([{**r.csv_record(), "detail": r.detail} for r in rows]))
    else:
        _emit(records, records, "csv")
    _write_report(records, args.out, None)
    return EXIT_OK if all(r.holds for r in rows) else EXIT_INFEASIBLE


# -- parser ------------------------------------------------------------------


def _row_list(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default=None,
                        help="machine-readable output at full precision")
    common.add_argument("--tol", type=float, default=1e-9, help="validation / verification tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for every random component")

    parser = argparse.ArgumentParser(
        prog="compatradius",
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a POVM file")
    p.add_argument("--povm", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("radius", parents=[common], help="compatibility radius with witness")
    p.add_argument("--povm", required=True)
    p.add_argument("--sym", action="store_true", help="radius of the symmetric extension")
    p.add_argument("--oracle", choices=["grid"], help="also run the sampled-minimum oracle")
    p.add_argument("--grid-points", type=int, default=20000)
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("construct", parents=[common], help="write a named parent POVM")
    p.add_argument("family", choices=["rotsym", "platonic", "thomson"])
    p.add_argument("--n", type=int)
    p.add_argument("--kind", choices=[k.value for k in PlatonicKind])
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--equal-weights", action="store_true",
                   help="thomson: fail instead of repairing weights when the centroid is nonzero")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", parents=[common], help="randomized maximization of the radius")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--planar", action="store_true")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--refine", type=int, default=100)
    p.add_argument("--budget-ms", type=int, default=None)
    p.add_argument("--out", help="SearchResult JSON")
    p.add_argument("--history", help="CSV of the running best; a .png plot is written next to it")
    p.set_defaults(func=cmd_search)

    lhs = sub.add_parser("lhs", help="local-hidden-state models for Werner states")
    lsub = lhs.add_subparsers(dest="lhs_command", required=True)
    p = lsub.add_parser("build", parents=[common])
    p.add_argument("--parent", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--settings", required=True, help="JSON list of directions")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lhs_build)
    p = lsub.add_parser("verify", parents=[common])
    p.add_argument("--model", required=True)
    p.add_argument("--r", type=float, default=None, help="defaults to the r stored in the model")
    p.set_defaults(func=cmd_lhs_verify)

    p = sub.add_parser("bounds", parents=[common], help="analytic caps and planar cost bounds")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=float)
    p.add_argument("--out", help="CSV; a .png of the cost bounds is written next to it")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table2", parents=[common], help="reproduce the radius table")
    p.add_argument("--rows", type=_row_list, default=list(range(3, 13)), help="e.g. 3..12 or 4,6,8")
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--refine", type=int, default=200)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--budget-ms", type=int, default=None, help="time budget per search")
    p.add_argument("--no-search", action="store_true", help="closed-form and Thomson columns only")
    p.add_argument("--out", help="CSV; a .png is written next to it")
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("platonic", parents=[common], help="reproduce the Platonic radius table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_platonic)

    p = sub.add_parser("table1", parents=[common], help="probe each Werner-state regime")
    p.add_argument("--settings", type=int, default=100, help="random settings for the model checks")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidPOVM, CompatError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
