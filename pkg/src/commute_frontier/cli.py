"""Command-line entry point: ``commute-frontier <subcommand> [options]``.

Exit status is 0 on success, 1 on data or domain errors and 2 on usage
errors. Every subcommand accepts ``--output json``.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

from . import report
from .dataset import builtin_table, load_csv, validate_table
from .drivecost import (
    DrivingCostParams,
    annual_driving_cost,
    default_params,
    load_params,
)
from .errors import CommuteFrontierError, TableValidationError
from .figures import cost_curves_figure, share_curves_figure
from .frontier import (
    DATA_WINDOW,
    LIMITS_WINDOW,
    BudgetConstraint,
    build_curve,
    commuting_limits,
    feasibility_zone,
)
from .regress import PolynomialModel, fit_xy
from .stats import load_coords
from .svgplot import render_plot, series_csv

ENV_INPUT = "COMMUTE_FRONTIER_INPUT"

PARAM_FLAGS = ("fuel_price", "fuel_economy", "insurance", "licence", "finance", "maintenance_rate",
               "tire_rate", "dep_flat", "dep_rate", "dep_threshold_km", "workdays_per_week",
               "weeks_per_year")


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _window(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("window must be LO,HI")
    return vals[0], vals[1]


def _years(text: str) -> list[int]:
    if text == "both":
        return [2011, 2016]
    if text in ("2011", "2016"):
        return [int(text)]
    raise argparse.ArgumentTypeError("year must be 2011, 2016 or both")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default=None,
                        help=f"CSV path or 'builtin' (default: ${ENV_INPUT} or builtin)")
    common.add_argument("--output", choices=("text", "json", "csv", "svg"), default="text")
    common.add_argument("--out", default=None, help="write the document here instead of stdout")
    common.add_argument("--domain-max", type=float, default=156.0, help="dataset cut-off km")

    parser = argparse.ArgumentParser(prog="commute-frontier", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="validate a community table")

    p = sub.add_parser("calibrate", parents=[common], help="calibrate tire rates and refit driving costs")
    p.add_argument("--year", type=_years, default=[2011, 2016])

    p = sub.add_parser("drive-cost", parents=[common], help="driving-cost breakdown by distance")
    p.add_argument("--year", type=_years, default=[2011])
    p.add_argument("--distance", type=_floats, required=True, help="one-way km, comma-separated")
    p.add_argument("--params", default=None, help="JSON parameter file keyed by year label")
    p.add_argument("--uncalibrated", action="store_true", help="zero tire rate")
    for name in PARAM_FLAGS:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float, default=None)

    p = sub.add_parser("fit", parents=[common], help="polynomial fit of a column on distance")
    p.add_argument("--response", required=True)
    p.add_argument("--degree", type=int, choices=(1, 2, 3), default=None,
                   help="1, 2 or 3 (default: all three)")

    p = sub.add_parser("diagnose", parents=[common], help="normality and spatial diagnostics")
    p.add_argument("--coords", default=None, help="CSV name,x_km,y_km")
    p.add_argument("--weights", default="knn:4")
    p.add_argument("--permutations", type=int, default=999)
    p.add_argument("--seed", type=int, default=0)

    for name, helptext in (("frontier", "feasibility zone for one budget"),
                           ("limits", "commuting-limit table")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--year", type=_years, default=[2011, 2016])
        p.add_argument("--income", type=_floats, default=None)
        p.add_argument("--p", type=_floats, default=None)
        p.add_argument("--basis", choices=("composed", "fitted"), default=None)
        p.add_argument("--degree", type=int, choices=(1, 2, 3), default=3, help="shelter polynomial degree")
        p.add_argument("--total-degree", type=int, choices=(1, 2, 3), default=1,
                       help="degree of the fitted total-cost curve (fitted basis)")
        p.add_argument("--window", type=_window, default=None)
        p.add_argument("--second-mode", type=float, default=0.0, help="monthly second-mode cost")
        p.add_argument("--parking", type=float, default=0.0, help="monthly parking cost")

    p = sub.add_parser("compare-years", parents=[common], help="2011 vs 2016 headline quantities")
    p.add_argument("--income", type=float, default=60000.0)
    p.add_argument("--p", type=_floats, default=[0.42, 0.45])

    p = sub.add_parser("plot", parents=[common], help="SVG chart of cost or share curves")
    p.add_argument("--figure", choices=("costs", "shares", "4", "5"), default="costs",
                   help="costs (alias 4) or shares (alias 5)")
    p.add_argument("--income", type=float, default=60000.0)
    p.add_argument("--p", type=_floats, default=[0.30, 0.35, 0.42, 0.45])
    return parser


FORMATS = {
    "validate": ("text", "json"),
    "calibrate": ("text", "json"),
    "drive-cost": ("text", "json", "csv"),
    "fit": ("text", "json"),
    "diagnose": ("text", "json"),
    "frontier": ("text", "json"),
    "limits": ("text", "json", "csv"),
    "compare-years": ("text", "json", "csv"),
    "plot": ("svg", "csv", "json"),
}


def _load(args, strict=True):
    source = args.input or os.environ.get(ENV_INPUT) or "builtin"
    if source == "builtin":
        return builtin_table()
    return load_csv(source, domain_max_km=args.domain_max, strict=strict)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_validate(args) -> tuple[int, str]:
    source = args.input or os.environ.get(ENV_INPUT) or "builtin"
    if source == "builtin":
        table = builtin_table()
    else:
        table = load_csv(source, domain_max_km=args.domain_max, strict=False)
    rep = validate_table(table)
    doc = _dump(rep.to_dict()) if args.output == "json" else rep.to_text()
    return (0 if rep.ok else 1), doc


def cmd_calibrate(args):
    table = _load(args)
    d = table.column("distance_km")
    out = {}
    for year in args.year:
        rate, model = report.reconstructed_drive_fit(table, year)
        observed = table.column(f"drive_{year}")
        rebuilt = [annual_driving_cost(x, default_params(year, calibrated=False)
                                       .with_overrides(tire_rate=rate)).total_monthly for x in d]
        rel = max(abs(r / o - 1) for r, o in zip(rebuilt, observed))
        out[str(year)] = {"tire_rate": rate, "max_relative_error": rel, "model": model.to_dict()}
    if args.output == "json":
        return 0, _dump(out)
    lines = []
    for year, body in out.items():
        lines.append(f"{year}: tire rate {body['tire_rate']:.6f} $/km, "
                     f"max relative error {body['max_relative_error']:.4%}")
        lines.append(report.model_text(PolynomialModel.from_dict(body["model"])))
    return 0, "\n".join(lines)


def _params_for(args, year) -> DrivingCostParams:
    if args.params:
        with open(args.params, encoding="utf-8") as fh:
            sets = load_params(fh.read())
        if str(year) not in sets:
            raise UsageError(f"parameter file has no entry for {year}")
        params = sets[str(year)]
    else:
        params = default_params(year, calibrated=not args.uncalibrated)
    overrides = {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k) is not None}
    return params.with_overrides(**overrides) if overrides else params


def cmd_drive_cost(args):
    rows = []
    for year in args.year:
        params = _params_for(args, year)
        for dist in args.distance:
            b = annual_driving_cost(dist, params)
            rows.append({"year": params.year_label, "distance_km": dist, **b.to_dict()})
    if args.output == "json":
        return 0, _dump(rows)
    keys = list(rows[0])
    if args.output == "csv":
        buf = io.StringIO()
        buf.write(",".join(keys) + "\n")
        for r in rows:
            buf.write(",".join(str(r[k]) if isinstance(r[k], str) else repr(float(r[k])) for k in keys) + "\n")
        return 0, buf.getvalue()
    lines = [f"{'year':<6}{'km':>8}{'annual km':>11}{'gas':>10}{'deprec':>10}{'maint':>9}"
             f"{'tires':>9}{'annual':>11}{'monthly':>10}"]
    for r in rows:
        lines.append(f"{r['year']:<6}{r['distance_km']:>8g}{r['annual_km']:>11.0f}{r['gas']:>10.2f}"
                     f"{r['depreciation']:>10.2f}{r['maintenance']:>9.2f}{r['tires']:>9.2f}"
                     f"{r['total_annual']:>11.2f}{r['total_monthly']:>10.2f}")
    return 0, "\n".join(lines) + "\n"


def cmd_fit(args):
    table = _load(args)
    d = table.column("distance_km")
    y = table.column(args.response)
    degrees = [args.degree] if args.degree else [3, 2, 1]
    models = {f"degree_{k}": fit_xy(d, y, k, label=args.response) for k in degrees}
    if args.output == "json":
        return 0, report.models_json(models) + "\n"
    return 0, f"{args.response} as a function of distance (n={len(d)})\n" + "".join(
        report.model_text(m) for m in models.values())


def cmd_diagnose(args):
    table = _load(args)
    coords = load_coords(args.coords) if args.coords else None
    rows = report.diagnostics(table, coords, args.weights, args.permutations, args.seed)
    if args.output == "json":
        return 0, _dump([r.to_dict() for r in rows])
    return 0, report.diagnostics_text(rows)


def _curves(args, table):
    basis = args.basis or ("fitted" if args.command == "limits" else "composed")
    return {str(y): build_curve(table, y, basis=basis, shelter_degree=args.degree,
                                total_degree=args.total_degree,
                                second_mode_monthly=args.second_mode, parking_monthly=args.parking)
            for y in args.year}


def cmd_frontier(args):
    table = _load(args)
    incomes = args.income or [60000.0]
    ps = args.p or [0.42]
    window = args.window or DATA_WINDOW
    zones = []
    for year, curve in _curves(args, table).items():
        for p in ps:
            for inc in incomes:
                z = feasibility_zone(curve, BudgetConstraint(p, inc), window)
                zones.append(({"year": year, "p": p, "income": inc}, z))
    if args.output == "json":
        return 0, _dump([{**key, **z.to_dict()} for key, z in zones])
    return 0, "\n".join(f"year {k['year']}, p={k['p']:g}, income ${k['income']:,.0f}\n"
                        + report.zone_text(z) for k, z in zones)


def cmd_limits(args):
    table = _load(args)
    incomes = args.income or [30000.0, 40000.0, 50000.0, 60000.0]
    ps = args.p or [0.42, 0.45]
    lt = commuting_limits(_curves(args, table), incomes, ps, args.window or LIMITS_WINDOW)
    if args.output == "json":
        return 0, lt.to_json() + "\n"
    if args.output == "csv":
        return 0, lt.to_csv()
    return 0, lt.to_text()


def cmd_compare(args):
    rows = report.compare_years(_load(args), args.income, args.p)
    if args.output == "json":
        return 0, report.comparisons_json(rows) + "\n"
    if args.output == "csv":
        return 0, report.comparisons_csv(rows)
    return 0, report.comparisons_text(rows)


def cmd_plot(args):
    table = _load(args)
    if args.figure in ("costs", "4"):
        series, guides, notes = cost_curves_figure(table, args.income, args.p)
        title, ylabel = "Shelter, driving and total cost with budget guidelines", "$ per month"
    else:
        series, guides, notes = share_curves_figure(table, args.p)
        title, ylabel = "Shelter + driving share of income", "% of after-tax income"
    if args.output == "csv":
        return 0, series_csv(series)
    if args.output == "json":
        return 0, _dump({"series": {k: [list(p) for p in v] for k, v in series.items()},
                         "guides": [list(g) for g in guides],
                         "annotations": [list(a) for a in notes]})
    return 0, render_plot(series, guides, notes, title=title, ylabel=ylabel)


COMMANDS = {
    "validate": cmd_validate,
    "calibrate": cmd_calibrate,
    "drive-cost": cmd_drive_cost,
    "fit": cmd_fit,
    "diagnose": cmd_diagnose,
    "frontier": cmd_frontier,
    "limits": cmd_limits,
    "compare-years": cmd_compare,
    "plot": cmd_plot,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # plot defaults to svg unless --output is given
    if argv and argv[0] == "plot" and "--output" not in argv:
        argv += ["--output", "svg"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.output not in FORMATS[args.command]:
        stderr.write(f"{args.command}: --output {args.output} not supported "
                     f"(choose from {', '.join(FORMATS[args.command])})\n")
        return 2
    try:
        status, doc = COMMANDS[args.command](args)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except TableValidationError as exc:
        stderr.write(exc.report.to_text())
        return 1
    except (CommuteFrontierError, OSError, KeyError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(doc)
    else:
        stdout.write(doc)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
