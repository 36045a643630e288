"""Series for the two standard charts: cost curves with budget guidelines, and
shelter + driving share of income with the same guidelines in percent."""

from __future__ import annotations

import numpy as np

from .frontier import BudgetConstraint, build_curve, crossings, feasibility_zone
from .regress import fit_xy

GUIDELINES = (0.30, 0.35, 0.42, 0.45)


def cost_curves_figure(table, income: float = 60000.0, ps=GUIDELINES, step: float = 1.0,
                       years=(2011, 2016), outer_p: float = 0.42):
    """Shelter, driving and total monthly cost per year plus horizontal budget levels.

    Annotations mark the shelter boundary at ``ps[0]`` and the outer
    total-cost boundary at ``outer_p``, where they exist.
    """
    series, annotations = {}, []
    for year in years:
        curve = build_curve(table, year)
        lo, hi = curve.domain
        xs = np.arange(lo, hi + step / 2, step)
        series[f"shelter {year}"] = [(float(x), curve.shelter_at(x)) for x in xs]
        series[f"driving {year}"] = [(float(x), curve.drive_at(x)) for x in xs]
        series[f"total {year}"] = [(float(x), curve.total_at(x)) for x in xs]
        inner = feasibility_zone(curve, BudgetConstraint(ps[0], income))
        if inner.d1 is not None:
            annotations.append((f"d1 {year} {ps[0]:.0%}: {inner.d1:.0f} km", inner.d1, inner.level))
        outer = feasibility_zone(curve, BudgetConstraint(outer_p, income))
        if outer.d2 is not None and outer.d2 < hi:
            annotations.append((f"d2 {year} {outer_p:.0%}: {outer.d2:.0f} km", outer.d2, outer.level))
    guides = [(f"{p:.0%} of ${income:,.0f}", p * income / 12.0) for p in ps]
    return series, guides, annotations


def share_curves_figure(table, ps=GUIDELINES, degree: int = 3, step: float = 1.0, years=(2011, 2016)):
    """Fitted shelter + driving percent-of-income curves with guideline levels in percent."""
    d = table.column("distance_km")
    lo, hi = float(d.min()), float(table.domain_max_km)
    xs = np.arange(lo, hi + step / 2, step)
    series, annotations = {}, []
    for year in years:
        model = fit_xy(d, table.column(f"pct_{year}"), degree, label=f"pct_{year}")
        series[f"share {year}"] = [(float(x), float(model(x))) for x in xs]
        for p in ps:
            for r in crossings(model, 100 * p, (lo, hi)):
                annotations.append((f"{year} {p:.0%}: {r:.0f} km", r, 100 * p))
    guides = [(f"{p:.0%}", 100 * p) for p in ps]
    return series, guides, annotations
