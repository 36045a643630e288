"""
Shelter cost curves
===================

Shelter cost falls with distance from the core. Linear, quadratic and cubic
fits show how much of the variation distance explains, and how the curve
moved between the two census years.
"""

from commute_frontier import builtin_table, fit_xy
from commute_frontier.report import model_text

table = builtin_table()
d = table.column("distance_km")

for year in (2011, 2016):
    print(f"--- shelter cost, {year}")
    for degree in (1, 2, 3):
        print(model_text(fit_xy(d, table.column(f"shelter_{year}"), degree)))

###############################################################################
# The 2016 line sits higher and falls faster: a bigger constant and a more
# negative slope.

lin = {y: fit_xy(d, table.column(f"shelter_{y}"), 1) for y in (2011, 2016)}
shift = lin[2016].coefficients[0] - lin[2011].coefficients[0]
steeper = lin[2016].coefficients[1] - lin[2011].coefficients[1]
print(f"constant up by {shift:.1f} $/month, slope changed by {steeper:.3f} $/month per km")

###############################################################################
# Household income also declines with distance.

for year in (2011, 2016):
    m = fit_xy(d, table.column(f"income_{year}"), 1)
    print(f"income {year}: {m.coefficients[0]:.0f} {m.coefficients[1]:+.2f}d  r2={m.r2:.3f}")
