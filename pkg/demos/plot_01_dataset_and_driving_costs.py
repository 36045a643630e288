"""
Community table and driving costs
=================================

The built-in table holds 23 communities around Toronto with census shelter
costs and incomes for 2011 and 2016. Driving costs are rebuilt from a
per-component vehicle cost model, with a tire rate calibrated by least
squares against the observed column.
"""

import numpy as np

from commute_frontier import builtin_table, validate_table
from commute_frontier.drivecost import (
    annual_driving_cost,
    calibrate_tire_rate,
    default_params,
    monthly_driving_cost_array,
)

table = builtin_table()
print(len(table), "communities, farthest at", table.column("distance_km").max(), "km")
print(validate_table(table).to_text())

###############################################################################
# Calibrate the tire rate for each year and compare the rebuilt costs with
# the observed ones.

d = table.column("distance_km")
for year in (2011, 2016):
    base = default_params(year, calibrated=False)
    rate = calibrate_tire_rate(table, base, year)
    rebuilt = monthly_driving_cost_array(d, base.with_overrides(tire_rate=rate))
    err = np.abs(rebuilt / table.column(f"drive_{year}") - 1)
    print(f"{year}: tire rate {rate:.5f} $/km, worst community off by {err.max():.3%}")

###############################################################################
# Depreciation switches from a flat annual amount to a per-km charge once
# yearly mileage passes 18,000 km, i.e. at about 34.6 km one way. Monthly
# cost therefore drops at that distance.

p = default_params(2011)
kink = p.kink_distance_km
for x in (kink - 0.01, kink + 0.01):
    b = annual_driving_cost(x, p)
    print(f"d={x:7.3f} km  depreciation {b.depreciation:8.2f}  monthly {b.total_monthly:7.2f}")
