import dataclasses
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commute_frontier.dataset import MANDATORY, load_table
from commute_frontier.drivecost import (
    CALIBRATED_TIRE_RATE,
    PARAMS_2011,
    PARAMS_2016,
    DrivingCostParams,
    annual_driving_cost,
    annual_km,
    calibrate_tire_rate,
    default_params,
    dump_params,
    load_params,
    monthly_driving_cost,
    monthly_driving_cost_array,
)
from commute_frontier.errors import DegenerateError, DomainError, InsufficientDataError


def test_annual_km():
    assert annual_km(10, PARAMS_2011) == 5200
    assert annual_km(0, PARAMS_2011) == 0
    assert annual_km(51, PARAMS_2011) == 26520


def test_breakdown_hand_arithmetic():
    b = annual_driving_cost(10, default_params(2011, calibrated=False))
    assert b.gas == pytest.approx(536.64)
    assert b.depreciation == 3515
    assert b.maintenance == pytest.approx(126.36)
    assert b.tires == 0
    assert b.total_annual == pytest.approx(536.64 + 1936 + 115 + 3515 + 699 + 126.36)


def test_zero_distance_is_fixed_costs():
    assert monthly_driving_cost(0, PARAMS_2011) == pytest.approx((1936 + 115 + 699 + 3515) / 12)
    assert monthly_driving_cost(0, PARAMS_2011) == pytest.approx(522.08, abs=0.005)


@pytest.mark.parametrize("d,year,observed", [(10, 2011, 581.88), (51, 2011, 591.27), (79, 2016, 831.63)])
def test_calibrated_costs_match_observed(d, year, observed):
    assert monthly_driving_cost(d, default_params(year)) == pytest.approx(observed, rel=0.01)


def test_calibrated_rates_frozen_from_oracle(table):
    for year in (2011, 2016):
        rate = calibrate_tire_rate(table, default_params(year, calibrated=False), year)
        assert rate == pytest.approx(CALIBRATED_TIRE_RATE[str(year)], rel=1e-12)
    assert CALIBRATED_TIRE_RATE["2011"] == pytest.approx(0.0083, abs=0.002)
    assert CALIBRATED_TIRE_RATE["2016"] == pytest.approx(0.0198, abs=0.002)


def test_calibration_matches_numeric_least_squares(table):
    # independent oracle: lstsq on the one-column design
    base = default_params(2016, calibrated=False)
    km = np.array([annual_km(d, base) for d in table.column("distance_km")])
    resid = 12 * table.column("drive_2016") - np.array(
        [annual_driving_cost(d, base).total_annual for d in table.column("distance_km")])
    sol, *_ = np.linalg.lstsq(km[:, None], resid, rcond=None)
    assert calibrate_tire_rate(table, base, 2016) == pytest.approx(sol[0], rel=1e-10)


def _synthetic(rate, distances):
    params = PARAMS_2011.with_overrides(tire_rate=rate)
    header = ",".join(MANDATORY + ("drive_2011",))
    rows = [f"c{i},{d},30,60000,60000,1000,1000,{monthly_driving_cost(d, params)!r}"
            for i, d in enumerate(distances)]
    return load_table(io.StringIO("\n".join([header, *rows])))


def test_calibration_round_trip():
    t = _synthetic(0.0100, [10, 25, 40, 77, 120, 156])
    assert calibrate_tire_rate(t, PARAMS_2011, 2011) == pytest.approx(0.0100, abs=1e-9)


def test_calibration_needs_two_records():
    t = _synthetic(0.01, [50])
    with pytest.raises(InsufficientDataError):
        calibrate_tire_rate(t, PARAMS_2011, 2011)


def test_calibration_degenerate_when_no_mileage():
    t = _synthetic(0.01, [10, 20])
    with pytest.raises(DegenerateError):
        calibrate_tire_rate(t, PARAMS_2011.with_overrides(workdays_per_week=0), 2011)


def test_depreciation_kink_two_sided():
    kink = PARAMS_2011.kink_distance_km
    assert kink == pytest.approx(18000 / 520)
    below = annual_driving_cost(kink - 1e-6, PARAMS_2011)
    at = annual_driving_cost(kink, PARAMS_2011)
    above = annual_driving_cost(kink + 1e-6, PARAMS_2011)
    assert below.depreciation == 3515
    assert at.depreciation == 3515  # threshold itself is flat: exclusive comparison
    assert above.depreciation == pytest.approx(0.028 * 18000, rel=1e-6)
    # 17.31 km is still on the flat side of the threshold
    assert annual_driving_cost(17.31, PARAMS_2011).depreciation == 3515


def test_array_matches_scalar():
    d = np.linspace(0, 250, 501)
    for p in (PARAMS_2011, PARAMS_2016):
        scalar = [monthly_driving_cost(x, p) for x in d]
        assert np.allclose(monthly_driving_cost_array(d, p), scalar, rtol=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(35, 250), st.floats(35, 250))
def test_monotone_above_kink(a, b):
    lo, hi = sorted((a, b))
    assert monthly_driving_cost(lo, PARAMS_2016) <= monthly_driving_cost(hi, PARAMS_2016)


@pytest.mark.parametrize("d", [-1, float("nan"), float("inf")])
def test_bad_distance(d):
    with pytest.raises(DomainError):
        annual_driving_cost(d, PARAMS_2011)


@pytest.mark.parametrize("field,value", [("fuel_price", -1), ("fuel_economy", 0), ("dep_threshold_km", 0)])
def test_param_validation(field, value):
    with pytest.raises(DomainError):
        PARAMS_2011.with_overrides(**{field: value})


def test_params_json_round_trip():
    text = dump_params({"2011": PARAMS_2011, "2016": PARAMS_2016})
    back = load_params(text)
    assert back == {"2011": PARAMS_2011, "2016": PARAMS_2016}


def test_params_from_dict_rejects_unknown_keys():
    body = dataclasses.asdict(PARAMS_2011) | {"spare_tire": 1}
    with pytest.raises(DomainError, match="spare_tire"):
        DrivingCostParams.from_dict(body)


def test_unknown_year():
    with pytest.raises(DomainError):
        default_params(2021)
