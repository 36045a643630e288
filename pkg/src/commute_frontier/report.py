"""Text, JSON and CSV renderings of fitted models, diagnostics and year comparisons."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError
from .drivecost import calibrate_tire_rate, default_params, monthly_driving_cost_array
from .frontier import LIMITS_WINDOW, BudgetConstraint, Verdict, build_curve, feasibility_zone, limits_curves
from .regress import DEGREE_NAMES, PolynomialModel, fit_xy
from .stats import DiagnosticResult, build_weights, morans_i, ryan_joiner


def fmt_sig(x: float, sig: int = 4) -> str:
    """Coefficient formatting: integers above 1000, otherwise ``sig`` significant figures."""
    if x is None or not math.isfinite(x):
        return str(x)
    if abs(x) >= 1000:
        return f"{x:.0f}"
    return np.format_float_positional(x, precision=sig, unique=False, fractional=False, trim="-")


def fmt_p(p: float) -> str:
    return "p < 0.001" if p < 0.001 else f"p={p:.3f}"


def significance(p: float) -> str:
    if p < 0.01:
        return "(*)"
    if p < 0.05:
        return "(**)"
    return ""


def fmt_money(x: float) -> str:
    return f"{x:,.2f}"


def model_text(model: PolynomialModel) -> str:
    """Three-line rendering in the layout of a regression estimates table."""
    name = DEGREE_NAMES.get(model.degree, f"Degree-{model.degree}")
    head = f"{name} Regression"
    if model.r2 is not None:
        head += (f"  r^2={model.r2:.3f} {fmt_p(model.overall_p)}{significance(model.overall_p)}"
                 f" s={model.s:.2f}")
    terms = []
    for k, c in enumerate(model.coefficients[1:], start=1):
        power = "d" if k == 1 else f"d^{k}"
        sign = "+" if c >= 0 else "-"
        terms.append(f"{sign}{fmt_sig(abs(c))}{power}")
    lines = [head, f"Constant  {fmt_sig(model.coefficients[0])}"]
    if model.coef_p is not None:
        lines[-1] += f" ({fmt_p(model.coef_p[0])})"
    label = "Slope Parameter" if model.degree == 1 else "Slope Parameters"
    slope = " ".join(terms)
    if model.coef_p is not None and model.degree == 1:
        slope += f" ({fmt_p(model.coef_p[1])})"
    lines.append(f"{label}  {slope}")
    return "\n".join(lines) + "\n"


def models_json(models: dict[str, PolynomialModel]) -> str:
    return json.dumps({k: m.to_dict() for k, m in models.items()}, indent=2)


# diagnosed variables: (label, column, multiplier to the reported unit, unit)
DIAGNOSTIC_VARIABLES = (
    ("2011 Average After-tax Household Income", "income_2011", 1.0, "/year"),
    ("2016 Average After-tax Household Income", "income_2016", 1.0, "/year"),
    ("2011 Average Shelter Cost", "shelter_2011", 1.0, "/month"),
    ("2016 Average Shelter Cost", "shelter_2016", 1.0, "/month"),
    ("2011 Total Driving Cost", "drive_2011", 12.0, "/year"),
    ("2016 Total Driving Cost", "drive_2016", 12.0, "/year"),
    ("2011 Total Cost", "total_2011", 1.0, "/month"),
    ("2016 Total Cost", "total_2016", 1.0, "/month"),
    ("2011 Shelter + Driving %", "pct_2011", 1.0, "%"),
    ("2016 Shelter + Driving %", "pct_2016", 1.0, "%"),
)


@dataclass(frozen=True)
class DiagnosticRow:
    label: str
    column: str
    mean: float
    unit: str
    ryan_joiner: DiagnosticResult
    moran: DiagnosticResult | None

    def to_dict(self) -> dict:
        def res(r):
            if r is None:
                return None
            return {"statistic": r.statistic, "p_value": r.p_value, "p_label": r.p_label,
                    "method": r.method, "detail": r.detail}
        return {"label": self.label, "column": self.column, "mean": self.mean, "unit": self.unit,
                "ryan_joiner": res(self.ryan_joiner), "morans_i": res(self.moran)}


def diagnostics(table, coords=None, weights_spec: str = "knn:4", permutations: int = 999,
                seed: int = 0) -> list[DiagnosticRow]:
    """Ryan-Joiner for every variable; Moran's I only when coordinates are supplied.

    ``coords`` maps community name to planar (x, y) km.
    """
    w = None
    if coords is not None:
        missing = [n for n in table.names if n not in coords]
        if missing:
            raise SchemaError(f"no coordinates for {', '.join(missing)}")
        w = build_weights([coords[n] for n in table.names], weights_spec)
    rows = []
    for label, col, mult, unit in DIAGNOSTIC_VARIABLES:
        vals = table.column(col, allow_missing=True)
        if np.any(np.isnan(vals)):
            continue
        vals = vals * mult
        moran = morans_i(vals, w, permutations, seed) if w is not None else None
        rows.append(DiagnosticRow(label, col, float(vals.mean()), unit, ryan_joiner(vals), moran))
    return rows


def diagnostics_text(rows: list[DiagnosticRow]) -> str:
    out = [f"{'Variable':<42}{'Mean':>16}  {'Global Moran I (p)':<22}{'Ryan-Joiner (p)':<18}"]
    for r in rows:
        if r.unit == "%":
            mean = f"{r.mean:.2f}%"
        else:
            mean = f"${r.mean:,.0f}{r.unit}"
        moran = "n/a (no coords)" if r.moran is None else \
            f"{r.moran.statistic:.4f} ({r.moran.p_value:.3f})"
        rj = f"{r.ryan_joiner.statistic:.3f} ({r.ryan_joiner.p_label})"
        out.append(f"{r.label:<42}{mean:>16}  {moran:<22}{rj:<18}")
    return "\n".join(out) + "\n"


def reconstructed_drive_fit(table, year) -> tuple[float, PolynomialModel]:
    """Calibrate the tire rate, rebuild monthly driving costs and regress them on distance."""
    params = default_params(year, calibrated=False)
    rate = calibrate_tire_rate(table, params, year)
    d = table.column("distance_km")
    rebuilt = monthly_driving_cost_array(d, params.with_overrides(tire_rate=rate))
    return rate, fit_xy(d, rebuilt, 1, label=f"drive_model_{year}")


@dataclass(frozen=True)
class Comparison:
    quantity: str
    v2011: float | None
    v2016: float | None

    @property
    def delta(self) -> float | None:
        if self.v2011 is None or self.v2016 is None:
            return None
        return self.v2016 - self.v2011


def compare_years(table, income: float = 60000.0, ps=(0.42, 0.45)) -> list[Comparison]:
    """Side-by-side 2011 / 2016 values of the headline quantities with signed deltas."""
    d = table.column("distance_km")
    per_year: dict[int, dict[str, float | None]] = {}
    for year in (2011, 2016):
        vals: dict[str, float | None] = {}
        for deg in (1, 3):
            m = fit_xy(d, table.column(f"shelter_{year}"), deg)
            vals[f"shelter deg{deg} constant"] = m.coefficients[0]
            vals[f"shelter deg{deg} slope"] = m.coefficients[1]
            vals[f"shelter deg{deg} r2"] = m.r2
        m = fit_xy(d, table.column(f"total_{year}"), 1)
        vals["total cost linear constant"] = m.coefficients[0]
        vals["total cost linear slope"] = m.coefficients[1]
        rate, dm = reconstructed_drive_fit(table, year)
        vals["tire rate $/km"] = rate
        vals["driving cost linear constant"] = dm.coefficients[0]
        vals["driving cost linear slope"] = dm.coefficients[1]
        for col in ("income", "shelter", "total", "pct"):
            vals[f"mean {col}"] = float(table.column(f"{col}_{year}").mean())
        curve = limits_curves(table, years=(year,))[str(year)]
        for p in ps:
            z = feasibility_zone(curve, BudgetConstraint(p, income), LIMITS_WINDOW)
            vals[f"commuting limit km @ {p:g} of {income:,.0f}"] = z.d2
        composed = build_curve(table, year)
        z = feasibility_zone(composed, BudgetConstraint(0.30, income))
        vals[f"shelter boundary d1 km @ 0.3 of {income:,.0f}"] = z.d1
        per_year[year] = vals
    return [Comparison(k, per_year[2011][k], per_year[2016][k]) for k in per_year[2011]]


def comparisons_json(rows: list[Comparison]) -> str:
    return json.dumps([{"quantity": r.quantity, "2011": r.v2011, "2016": r.v2016, "delta": r.delta}
                       for r in rows], indent=2)


def comparisons_text(rows: list[Comparison]) -> str:
    def f(v):
        return "-" if v is None else fmt_sig(v)
    out = [f"{'Quantity':<44}{'2011':>14}{'2016':>14}{'delta':>14}"]
    for r in rows:
        out.append(f"{r.quantity:<44}{f(r.v2011):>14}{f(r.v2016):>14}{f(r.delta):>14}")
    return "\n".join(out) + "\n"


def comparisons_csv(rows: list[Comparison]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "2011", "2016", "delta"])
    for r in rows:
        w.writerow([r.quantity] + ["" if v is None else repr(v) for v in (r.v2011, r.v2016, r.delta)])
    return buf.getvalue()


def zone_text(zone) -> str:
    def km(v):
        return "none" if v is None else f"{v:.2f} km"
    lines = [
        f"verdict         {zone.verdict.value}",
        f"budget level    ${fmt_money(zone.level)}/month",
        f"window          {zone.window[0]:g}-{zone.window[1]:g} km",
        f"d1 (shelter)    {km(zone.d1)}",
        f"d2 (total)      {km(zone.d2)}",
        f"feasible band   {'none' if zone.band is None else f'{zone.band[0]:.2f}-{zone.band[1]:.2f} km'}",
        f"indifference    {km(zone.indifference_d)}",
        f"extrapolated    {'yes' if zone.extrapolated else 'no'}",
        f"basis           {zone.provenance.get('basis', '')}",
    ]
    if zone.verdict is Verdict.FEASIBLE_BAND and len(zone.segments) > 1:
        segs = ", ".join(f"{a:.2f}-{b:.2f}" for a, b in zone.segments)
        lines.append(f"segments        {segs}")
    return "\n".join(lines) + "\n"
