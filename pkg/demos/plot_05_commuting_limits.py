"""
Commuting limits by income
==========================

For each income and allocation, the farthest distance at which the observed
total cost trend stays affordable. A linear fit of total cost is used here;
"*" marks budgets that are short at every distance, brackets mark limits
that lie beyond the observed communities.
"""

from pathlib import Path

from commute_frontier import builtin_table, commuting_limits, limits_curves
from commute_frontier.figures import share_curves_figure
from commute_frontier.report import compare_years, comparisons_text
from commute_frontier.svgplot import render_plot

table = builtin_table()
limits = commuting_limits(limits_curves(table), [30000, 40000, 50000, 60000], [0.42, 0.45])
print(limits.to_text())

###############################################################################
# The share of income going to shelter plus driving, against the same
# guidelines in percent.

series, guides, notes = share_curves_figure(table)
for label, x, y in notes:
    print(label)
Path("share_curves.svg").write_text(
    render_plot(series, guides, notes, title="Shelter + driving share of income",
                ylabel="% of after-tax income"))

###############################################################################
# Headline quantities side by side.

print(comparisons_text(compare_years(table)))
