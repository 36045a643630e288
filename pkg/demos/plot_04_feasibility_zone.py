"""
Where can a household afford to live?
=====================================

A household spending a fraction ``p`` of income on shelter plus commuting
can live wherever total monthly cost stays below ``p * income / 12``. The
inner boundary is where shelter alone drops to that level; the outer
boundary is where commuting pushes the total back above it.
"""

from pathlib import Path

from commute_frontier import BudgetConstraint, build_curve, builtin_table, feasibility_zone
from commute_frontier.figures import cost_curves_figure
from commute_frontier.report import zone_text
from commute_frontier.svgplot import render_plot

table = builtin_table()
curves = {y: build_curve(table, y) for y in (2011, 2016)}

for year, curve in curves.items():
    for name in ("rule-of-thumb", "tds"):
        budget = BudgetConstraint.preset(name, 60000)
        print(f"--- {year}, {name} ({budget.p:.0%} of $60,000)")
        print(zone_text(feasibility_zone(curve, budget)))

###############################################################################
# Draw the cost curves with the four budget guidelines.

series, guides, notes = cost_curves_figure(table, income=60000)
out = Path("cost_curves.svg")
out.write_text(render_plot(series, guides, notes, title="Monthly costs with budget guidelines"))
print("wrote", out)
