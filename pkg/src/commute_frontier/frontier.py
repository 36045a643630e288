"""Income-constrained housing frontier: where is ``TC(d) <= p * I`` satisfied?

Total monthly cost at one-way distance ``d`` is

    TC(d) = R(d) + T1(d) + T2 + PC

with ``R`` a shelter-cost polynomial, ``T1`` the car commuting cost,
``T2`` a second-mode cost and ``PC`` parking (both flat monthly amounts,
zero by default). A curve may instead carry a polynomial fitted directly to
observed total costs; it then replaces ``R + T1`` in ``TC``, while ``R`` is
still used for the inner boundary.

Boundaries, for the level ``L = p * I / 12``:

* ``d1`` - first distance where shelter alone falls to ``L`` (inside it
  housing is unaffordable before any commuting);
* ``d2`` - the farthest distance with ``TC(d) <= L`` (beyond it commuting
  makes the location unaffordable).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from . import drivecost
from .drivecost import DrivingCostParams, calibrate_tire_rate, default_params
from .errors import DomainError, NumericError
from .regress import PolynomialModel, Prediction, fit_xy

DATA_WINDOW = (10.0, 156.0)
HARD_MAX_KM = 250.0
LIMITS_WINDOW = (0.0, HARD_MAX_KM)
GRID_STEP_KM = 1.0
XTOL_KM = 1e-6

PRESETS = {
    "rule-of-thumb": 0.30,
    "gds": 0.35,
    "tds": 0.42,
    "unaffordable": 0.45,
}


@dataclass(frozen=True)
class BudgetConstraint:
    p: float
    income_annual: float

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")
        if not (math.isfinite(self.income_annual) and self.income_annual > 0):
            raise DomainError(f"income must be > 0, got {self.income_annual}")

    @classmethod
    def preset(cls, name: str, income_annual: float) -> "BudgetConstraint":
        try:
            return cls(PRESETS[name], income_annual)
        except KeyError:
            raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None

    @property
    def income_monthly(self) -> float:
        return self.income_annual / 12.0

    @property
    def level(self) -> float:
        """Monthly amount allocated to shelter plus transport."""
        return self.p * self.income_monthly


@dataclass(frozen=True)
class TotalCostCurve:
    shelter: PolynomialModel
    drive_params: DrivingCostParams
    second_mode_monthly: float = 0.0
    parking_monthly: float = 0.0
    domain: tuple[float, float] = DATA_WINDOW
    fitted_total: PolynomialModel | None = None
    hard_max: float = HARD_MAX_KM

    def __post_init__(self):
        if self.second_mode_monthly < 0 or self.parking_monthly < 0:
            raise DomainError("second-mode and parking costs must be >= 0")
        lo, hi = self.domain
        if not 0 <= lo < hi <= self.hard_max:
            raise DomainError(f"domain {self.domain} must satisfy 0 <= lo < hi <= {self.hard_max}")

    @property
    def basis(self) -> str:
        if self.fitted_total is None:
            return "composed"
        return f"fitted-total:{self.fitted_total.degree}"

    def _check(self, d: float) -> float:
        d = float(d)
        if not math.isfinite(d) or d < 0 or d > self.hard_max:
            raise DomainError(f"distance {d} outside the evaluation window [0, {self.hard_max}]")
        return d

    def shelter_at(self, d: float) -> float:
        return float(self.shelter(self._check(d)))

    def drive_at(self, d: float) -> float:
        return drivecost.monthly_driving_cost(self._check(d), self.drive_params)

    def total_at(self, d: float) -> float:
        d = self._check(d)
        if self.fitted_total is not None:
            core = float(self.fitted_total(d))
        else:
            core = float(self.shelter(d)) + drivecost.monthly_driving_cost(d, self.drive_params)
        return core + self.second_mode_monthly + self.parking_monthly

    def is_extrapolated(self, d: float) -> bool:
        lo, hi = self.domain
        return not lo <= d <= hi


def total_cost(curve: TotalCostCurve, d: float) -> Prediction:
    """Monthly shelter + transport cost at ``d``, flagged when outside the data domain."""
    return Prediction(curve.total_at(d), curve.is_extrapolated(float(d)))


def _check_window(window) -> tuple[float, float]:
    lo, hi = (float(w) for w in window)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"invalid window {window!r}")
    return lo, hi


def crossings(
    f: Callable[[float], float],
    level: float,
    window: Sequence[float],
    grid_step: float = GRID_STEP_KM,
    xtol: float = XTOL_KM,
) -> list[float]:
    """Distances in ``window`` where ``f(d) - level`` changes sign.

    The window is scanned at ``grid_step``; every bracketing pair is refined
    by bisection until the bracket is narrower than ``xtol`` and its midpoint
    returned. A grid node where ``f`` equals ``level`` exactly counts as a
    crossing. Jumps through the level (e.g. the depreciation kink of the
    driving-cost model) are located like any other sign change.
    """
    lo, hi = _check_window(window)
    if not grid_step > 0:
        raise DomainError("grid_step must be > 0")
    if not 0 < xtol <= 0.01:
        raise DomainError("xtol must lie in (0, 0.01]")

    def g(d):
        v = f(d)
        if not math.isfinite(v):
            raise NumericError(f"non-finite curve value at d={d}")
        return v - level

    count = int(math.floor((hi - lo) / grid_step + 1e-9))
    nodes = [lo + i * grid_step for i in range(count + 1)]
    if hi - nodes[-1] > 1e-12:
        nodes.append(hi)
    values = [g(d) for d in nodes]

    roots: list[float] = []

    def add(r):
        if not roots or r - roots[-1] > xtol:
            roots.append(r)

    for i, (a, ga) in enumerate(zip(nodes, values)):
        if ga == 0.0:
            add(a)
            continue
        if i + 1 == len(nodes):
            break
        b, gb = nodes[i + 1], values[i + 1]
        if gb == 0.0 or (ga > 0) == (gb > 0):
            continue
        while b - a > xtol:
            m = 0.5 * (a + b)
            gm = g(m)
            if gm == 0.0:
                a = b = m
                break
            if (gm > 0) == (ga > 0):
                a, ga = m, gm
            else:
                b = m
        add(0.5 * (a + b))
    return roots


class Verdict(str, enum.Enum):
    FEASIBLE_BAND = "FeasibleBand"
    INFEASIBLE_EVERYWHERE = "InfeasibleEverywhere"
    FEASIBLE_EVERYWHERE = "FeasibleEverywhereInDomain"


@dataclass(frozen=True)
class FeasibilityZone:
    d1: float | None
    d2: float | None
    indifference_d: float | None
    verdict: Verdict
    extrapolated: bool
    band: tuple[float, float] | None = None
    segments: tuple[tuple[float, float], ...] = ()
    level: float = math.nan
    window: tuple[float, float] = DATA_WINDOW
    provenance: Mapping[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "d1": self.d1,
            "d2": self.d2,
            "indifference_d": self.indifference_d,
            "verdict": self.verdict.value,
            "extrapolated": self.extrapolated,
            "band": list(self.band) if self.band else None,
            "segments": [list(s) for s in self.segments],
            "level_monthly": self.level,
            "window": list(self.window),
            "provenance": dict(self.provenance),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _feasible_segments(curve, level, lo, hi, grid_step):
    roots = crossings(curve.total_at, level, (lo, hi), grid_step)
    cuts = [lo] + [r for r in roots if lo < r < hi] + [hi]
    segments: list[list[float]] = []
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        if curve.total_at(0.5 * (a + b)) <= level:
            if segments and abs(segments[-1][1] - a) <= 1e-9:
                segments[-1][1] = b
            else:
                segments.append([a, b])
    return [tuple(s) for s in segments]


def feasibility_zone(
    curve: TotalCostCurve,
    budget: BudgetConstraint,
    window: Sequence[float] | None = None,
    grid_step: float = GRID_STEP_KM,
) -> FeasibilityZone:
    """Locate d1, d2 and the feasible band for one budget.

    ``band`` is the contiguous feasible interval ending at ``d2``; when the
    feasible set is disconnected every piece is listed in ``segments``.
    """
    lo, hi = _check_window(window if window is not None else curve.domain)
    if lo < 0 or hi > curve.hard_max:
        raise DomainError(f"window {window} exceeds [0, {curve.hard_max}]")
    level = budget.level

    segments = _feasible_segments(curve, level, lo, hi, grid_step)
    shelter_roots = crossings(curve.shelter_at, level, (lo, hi), grid_step)
    d1 = shelter_roots[0] if shelter_roots else None
    indiff = indifference_distance(curve, (lo, hi), grid_step)

    if not segments:
        verdict, d2, band = Verdict.INFEASIBLE_EVERYWHERE, None, None
    elif len(segments) == 1 and segments[0] == (lo, hi):
        verdict, d2, band = Verdict.FEASIBLE_EVERYWHERE, hi, segments[0]
    else:
        verdict, d2, band = Verdict.FEASIBLE_BAND, segments[-1][1], segments[-1]

    marks = [v for v in (d1, d2, band[0] if band else None) if v is not None]
    extrapolated = any(curve.is_extrapolated(v) for v in marks)
    total_src = "shelter polynomial + driving-cost model" if curve.fitted_total is None \
        else f"degree-{curve.fitted_total.degree} fit of observed total cost"
    provenance = {
        "d1": f"degree-{curve.shelter.degree} shelter polynomial crossing the budget level",
        "d2": f"last crossing of total cost ({total_src}) with the budget level",
        "basis": curve.basis,
    }
    return FeasibilityZone(
        d1=d1, d2=d2, indifference_d=indiff, verdict=verdict, extrapolated=extrapolated,
        band=band, segments=tuple(segments), level=level, window=(lo, hi),
        provenance=provenance,
    )


def indifference_distance(curve: TotalCostCurve, window=None, grid_step: float = GRID_STEP_KM):
    """First distance where monthly shelter cost equals monthly driving cost, or None."""
    lo, hi = _check_window(window if window is not None else curve.domain)
    roots = crossings(lambda d: curve.shelter_at(d) - curve.drive_at(d), 0.0, (lo, hi), grid_step)
    return roots[0] if roots else None


def affordability_share(curve: TotalCostCurve, d: float, income_annual: float) -> float:
    """Fraction of annual income consumed by shelter + transport at ``d``."""
    if not income_annual > 0:
        raise DomainError("income must be > 0")
    return 12.0 * curve.total_at(d) / income_annual


def required_income(curve: TotalCostCurve, d: float, p: float) -> float:
    """Annual income at which living at ``d`` uses exactly the fraction ``p``."""
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    return 12.0 * curve.total_at(d) / p


def build_curve(
    table,
    year,
    *,
    basis: str = "composed",
    shelter_degree: int = 3,
    total_degree: int = 1,
    params: DrivingCostParams | None = None,
    second_mode_monthly: float = 0.0,
    parking_monthly: float = 0.0,
) -> TotalCostCurve:
    """Fit the cost curves for ``year`` from a community table.

    ``basis="composed"`` prices transport with the driving-cost model (tire
    rate calibrated on ``table`` unless ``params`` is given).
    ``basis="fitted"`` uses a degree-``total_degree`` polynomial fitted to the
    observed total monthly costs.
    """
    year = int(year)
    d = table.column("distance_km")
    shelter = fit_xy(d, table.column(f"shelter_{year}"), shelter_degree, label=f"shelter_{year}")
    if params is None:
        params = default_params(year)
        if all(r.get(f"drive_{year}") is not None for r in table.records):
            params = replace(params, tire_rate=calibrate_tire_rate(table, params, year))
    fitted = None
    if basis == "fitted":
        fitted = fit_xy(d, table.column(f"total_{year}"), total_degree, label=f"total_{year}")
    elif basis != "composed":
        raise DomainError(f"basis must be 'composed' or 'fitted', got {basis!r}")
    domain = (float(d.min()), float(table.domain_max_km))
    return TotalCostCurve(shelter, params, second_mode_monthly, parking_monthly, domain, fitted)


@dataclass(frozen=True)
class LimitCell:
    year: str
    p: float
    income: float
    level_monthly: float
    d2: float | None
    verdict: Verdict
    extrapolated: bool

    @property
    def infeasible(self) -> bool:
        return self.verdict is Verdict.INFEASIBLE_EVERYWHERE

    def to_dict(self) -> dict:
        return {
            "year": self.year, "p": self.p, "income": self.income,
            "level_monthly": self.level_monthly, "d2": self.d2,
            "verdict": self.verdict.value, "extrapolated": self.extrapolated,
            "marker": "*" if self.infeasible else None,
        }


@dataclass(frozen=True)
class LimitsTable:
    cells: tuple[LimitCell, ...]
    incomes: tuple[float, ...]
    ps: tuple[float, ...]
    years: tuple[str, ...]
    window: tuple[float, float]
    basis: Mapping[str, str] = field(default_factory=dict)

    def cell(self, year, p: float, income: float) -> LimitCell:
        for c in self.cells:
            if c.year == str(year) and math.isclose(c.p, p) and math.isclose(c.income, income):
                return c
        raise KeyError((year, p, income))

    def to_dict(self) -> dict:
        return {
            "window": list(self.window),
            "basis": dict(self.basis),
            "incomes": list(self.incomes),
            "ps": list(self.ps),
            "years": list(self.years),
            "cells": [c.to_dict() for c in self.cells],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        label_w = 44
        col_w = 10
        head = "Annual Household Income".ljust(label_w) + "".join(
            f"${inc:,.0f}".rjust(col_w) for inc in self.incomes)
        lines = [head]
        for p in self.ps:
            lines.append(f"{p * 100:g}% Allocation of Monthly Income".ljust(label_w) + "".join(
                f"${inc * p / 12:,.0f}".rjust(col_w) for inc in self.incomes))
        for p in self.ps:
            for year in self.years:
                row = f"Commuting limit, km: {p * 100:g}% of income ({year})".ljust(label_w)
                for inc in self.incomes:
                    c = self.cell(year, p, inc)
                    if c.infeasible:
                        txt = "*"
                    else:
                        txt = f"{c.d2:.0f}"
                        if c.verdict is Verdict.FEASIBLE_EVERYWHERE:
                            txt = ">=" + txt
                        if c.extrapolated:
                            txt = f"[{txt}]"
                    row += txt.rjust(col_w)
                lines.append(row)
        lines.append("")
        lines.append("* total cost exceeds the allocation at every distance in the window")
        lines.append("[ ] boundary lies outside the observed data domain (extrapolated)")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        rows = ["year,p,income,level_monthly,d2,verdict,extrapolated"]
        for c in self.cells:
            d2 = "" if c.d2 is None else repr(c.d2)
            rows.append(f"{c.year},{c.p!r},{c.income!r},{c.level_monthly!r},{d2},"
                        f"{c.verdict.value},{str(c.extrapolated).lower()}")
        return "\n".join(rows) + "\n"


def commuting_limits(
    curves: Mapping[str, TotalCostCurve],
    incomes: Sequence[float],
    ps: Sequence[float],
    window: Sequence[float] = LIMITS_WINDOW,
    grid_step: float = GRID_STEP_KM,
) -> LimitsTable:
    """Outer commuting limit ``d2`` for every (year, p, income) combination."""
    if not incomes or not ps or not curves:
        raise DomainError("incomes, ps and curves must be non-empty")
    lo, hi = _check_window(window)
    cells = []
    for year, curve in curves.items():
        for p in ps:
            for inc in incomes:
                budget = BudgetConstraint(p, inc)
                zone = feasibility_zone(curve, budget, (lo, hi), grid_step)
                extrap = zone.d2 is not None and curve.is_extrapolated(zone.d2)
                cells.append(LimitCell(str(year), float(p), float(inc), budget.level,
                                       zone.d2, zone.verdict, extrap))
    return LimitsTable(
        cells=tuple(cells),
        incomes=tuple(float(i) for i in incomes),
        ps=tuple(float(p) for p in ps),
        years=tuple(str(y) for y in curves),
        window=(lo, hi),
        basis={str(y): c.basis for y, c in curves.items()},
    )


def limits_curves(table, years=(2011, 2016), basis: str = "fitted", **kwargs) -> dict[str, TotalCostCurve]:
    """Per-year curves used for the commuting-limits table.

    The default basis is a linear fit of observed total monthly cost, which
    matches the reference commuting-limit values best.
    """
    return {str(y): build_curve(table, y, basis=basis, **kwargs) for y in years}


__all__ = [
    "BudgetConstraint",
    "DATA_WINDOW",
    "FeasibilityZone",
    "HARD_MAX_KM",
    "LIMITS_WINDOW",
    "LimitCell",
    "LimitsTable",
    "PRESETS",
    "TotalCostCurve",
    "Verdict",
    "affordability_share",
    "build_curve",
    "commuting_limits",
    "crossings",
    "feasibility_zone",
    "indifference_distance",
    "limits_curves",
    "required_income",
    "total_cost",
]
