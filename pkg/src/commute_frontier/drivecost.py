"""Annual and monthly cost of commuting by car from a one-way distance.

Round trips are annualized at ``d * 2 * workdays * weeks``. Depreciation has
two exclusive regimes: a flat yearly amount up to the mileage threshold and
a per-km rate strictly above it. The tire rate is not given alongside
the other constants, so it is recovered by least squares from observed
monthly costs (:func:`calibrate_tire_rate`); the per-year defaults below are
the frozen results of that calibration on the built-in table.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .errors import DegenerateError, DomainError, InsufficientDataError

# least-squares tire rates over the built-in 23 communities ($/km)
CALIBRATED_TIRE_RATE = {
    "2011": 0.008347756058504580,
    "2016": 0.019825694953914615,
}


@dataclass(frozen=True)
class DrivingCostParams:
    year_label: str
    fuel_price: float  # $/L
    fuel_economy: float  # L/100 km
    insurance: float  # $/yr
    licence: float  # $/yr
    finance: float  # $/yr
    maintenance_rate: float  # $/km
    tire_rate: float = 0.0  # $/km
    dep_flat: float = 3515.0  # $/yr, at or below the threshold
    dep_rate: float = 0.028  # $/km, above the threshold
    dep_threshold_km: float = 18000.0  # km/yr
    workdays_per_week: float = 5
    weeks_per_year: float = 52

    def __post_init__(self):
        money = ("fuel_price", "insurance", "licence", "finance", "maintenance_rate",
                 "tire_rate", "dep_flat", "dep_rate")
        for name in money:
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.fuel_economy > 0:
            raise DomainError("fuel_economy must be > 0")
        if not self.dep_threshold_km > 0:
            raise DomainError("dep_threshold_km must be > 0")
        if self.workdays_per_week < 0 or self.weeks_per_year < 0:
            raise DomainError("workdays_per_week and weeks_per_year must be >= 0")

    def with_overrides(self, **changes) -> "DrivingCostParams":
        return replace(self, **changes)

    @property
    def kink_distance_km(self) -> float:
        """One-way distance at which annual mileage reaches the depreciation threshold."""
        return self.dep_threshold_km / (2 * self.workdays_per_week * self.weeks_per_year)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "DrivingCostParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        return cls(**data)


PARAMS_2011 = DrivingCostParams(
    year_label="2011",
    fuel_price=1.29,
    fuel_economy=8.0,
    insurance=1936.0,
    licence=115.0,
    finance=699.0,
    maintenance_rate=0.0243,
    tire_rate=CALIBRATED_TIRE_RATE["2011"],
)

PARAMS_2016 = DrivingCostParams(
    year_label="2016",
    fuel_price=1.02,
    fuel_economy=7.3,
    insurance=2630.0,
    licence=146.16,
    finance=836.64,
    maintenance_rate=0.0327,
    tire_rate=CALIBRATED_TIRE_RATE["2016"],
)

DEFAULT_PARAMS = {"2011": PARAMS_2011, "2016": PARAMS_2016}


def default_params(year, *, calibrated: bool = True) -> DrivingCostParams:
    """Cost-guide constants for ``year`` (2011 or 2016).

    With ``calibrated=False`` the tire rate is zero, i.e. only the listed
    components are priced.
    """
    try:
        params = DEFAULT_PARAMS[str(year)]
    except KeyError:
        raise DomainError(f"no default driving-cost parameters for year {year!r}") from None
    return params if calibrated else replace(params, tire_rate=0.0)


def dump_params(params_by_year: dict[str, DrivingCostParams]) -> str:
    """Serialize parameter sets to JSON keyed by ``year_label``."""
    return json.dumps({p.year_label: p.to_dict() for p in params_by_year.values()}, indent=2)


def load_params(text: str) -> dict[str, DrivingCostParams]:
    data = json.loads(text)
    out = {}
    for label, body in data.items():
        body = dict(body)
        body.setdefault("year_label", label)
        if body["year_label"] != label:
            raise DomainError(f"key {label!r} does not match year_label {body['year_label']!r}")
        out[label] = DrivingCostParams.from_dict(body)
    return out


@dataclass(frozen=True)
class CostBreakdown:
    annual_km: float
    gas: float
    insurance: float
    licence: float
    depreciation: float
    finance: float
    maintenance: float
    tires: float

    @property
    def total_annual(self) -> float:
        return (self.gas + self.insurance + self.licence + self.depreciation
                + self.finance + self.maintenance + self.tires)

    @property
    def total_monthly(self) -> float:
        return self.total_annual / 12.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["total_annual"] = self.total_annual
        out["total_monthly"] = self.total_monthly
        return out


def _check_distance(d: float) -> float:
    d = float(d)
    if not np.isfinite(d) or d < 0:
        raise DomainError(f"distance must be a finite value >= 0, got {d}")
    return d


def annual_km(d: float, params: DrivingCostParams) -> float:
    d = _check_distance(d)
    return d * 2 * params.workdays_per_week * params.weeks_per_year


def annual_driving_cost(d: float, params: DrivingCostParams) -> CostBreakdown:
    km = annual_km(d, params)
    if km > params.dep_threshold_km:
        depreciation = params.dep_rate * km
    else:
        depreciation = params.dep_flat
    return CostBreakdown(
        annual_km=km,
        gas=km / 100.0 * params.fuel_economy * params.fuel_price,
        insurance=params.insurance,
        licence=params.licence,
        depreciation=depreciation,
        finance=params.finance,
        maintenance=params.maintenance_rate * km,
        tires=params.tire_rate * km,
    )


def monthly_driving_cost(d: float, params: DrivingCostParams) -> float:
    return annual_driving_cost(d, params).total_monthly


def monthly_driving_cost_array(d, params: DrivingCostParams) -> np.ndarray:
    """Vectorized :func:`monthly_driving_cost` for plotting and grid scans."""
    d = np.asarray(d, dtype=float)
    if np.any(~np.isfinite(d)) or np.any(d < 0):
        raise DomainError("distances must be finite and >= 0")
    km = d * 2 * params.workdays_per_week * params.weeks_per_year
    dep = np.where(km > params.dep_threshold_km, params.dep_rate * km, params.dep_flat)
    variable = km * (params.fuel_economy * params.fuel_price / 100.0
                     + params.maintenance_rate + params.tire_rate)
    return (variable + dep + params.insurance + params.licence + params.finance) / 12.0


def calibrate_tire_rate(table, params: DrivingCostParams, year) -> float:
    """Least-squares tire rate that best reproduces observed driving costs.

    Minimizes ``sum((observed_annual - model_annual(rate))**2)`` over records
    with an observed monthly cost for ``year``. Since the model is linear in
    the rate, the minimizer is ``sum(resid * km) / sum(km**2)`` where
    ``resid`` is the observed annual cost minus the zero-tire model.
    """
    column = f"drive_{int(year)}"
    base = replace(params, tire_rate=0.0)
    km, resid = [], []
    for rec in table.records:
        observed = rec.get(column)
        if observed is None:
            continue
        k = annual_km(rec.distance_km, base)
        km.append(k)
        resid.append(12.0 * observed - annual_driving_cost(rec.distance_km, base).total_annual)
    if len(km) < 2:
        raise InsufficientDataError(f"need observed {column} for at least 2 records, got {len(km)}")
    km = np.asarray(km)
    resid = np.asarray(resid)
    denom = float(km @ km)
    if denom == 0.0:
        raise DegenerateError("all annual distances are zero; tire rate is unidentified")
    return float(resid @ km) / denom


__all__ = [
    "CALIBRATED_TIRE_RATE",
    "CostBreakdown",
    "DEFAULT_PARAMS",
    "DrivingCostParams",
    "PARAMS_2011",
    "PARAMS_2016",
    "annual_driving_cost",
    "annual_km",
    "calibrate_tire_rate",
    "default_params",
    "dump_params",
    "load_params",
    "monthly_driving_cost",
    "monthly_driving_cost_array",
]
