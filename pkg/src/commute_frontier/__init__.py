"""Income-constrained commuting-distance model.

Shelter-cost and driving-cost curves over distance from a metropolitan core,
the budget constraint ``TC(d) <= p * I`` and the feasible-housing band it
implies.
"""

from .dataset import CommunityRecord, CommunityTable, builtin_table, load_csv, load_table, validate_table
from .drivecost import (
    DrivingCostParams,
    annual_driving_cost,
    annual_km,
    calibrate_tire_rate,
    default_params,
    monthly_driving_cost,
)
from .frontier import (
    BudgetConstraint,
    TotalCostCurve,
    Verdict,
    affordability_share,
    build_curve,
    commuting_limits,
    crossings,
    feasibility_zone,
    indifference_distance,
    limits_curves,
    required_income,
    total_cost,
)
from .regress import PolynomialModel, fit_polynomial, fit_xy, predict
from .special import f_tail_p, regularized_incomplete_beta, t_tail_p
from .stats import build_weights, morans_i, ryan_joiner

__version__ = "0.1.0"

__all__ = [
    "BudgetConstraint", "CommunityRecord", "CommunityTable", "DrivingCostParams", "PolynomialModel",
    "TotalCostCurve", "Verdict", "affordability_share", "annual_driving_cost", "annual_km",
    "build_curve", "build_weights", "builtin_table", "calibrate_tire_rate", "commuting_limits",
    "crossings", "default_params", "f_tail_p", "feasibility_zone", "fit_polynomial", "fit_xy",
    "indifference_distance", "limits_curves", "load_csv", "load_table", "monthly_driving_cost",
    "morans_i", "predict", "regularized_incomplete_beta", "required_income", "ryan_joiner",
    "t_tail_p", "total_cost", "validate_table",
]
