"""
Normality and spatial autocorrelation
=====================================

Ryan-Joiner correlations check each variable against normal scores. Moran's
I needs community coordinates, which the table does not carry, so here a
synthetic layout shows the mechanics of the permutation test.
"""

import numpy as np

from commute_frontier import build_weights, builtin_table, morans_i, ryan_joiner
from commute_frontier.report import diagnostics, diagnostics_text

table = builtin_table()
print(diagnostics_text(diagnostics(table)))

###############################################################################
# Place communities on rays from the core at their road distance. Angles are
# arbitrary, so the statistic below says nothing about the real geography.

rng = np.random.default_rng(0)
angles = rng.uniform(0, 2 * np.pi, len(table))
d = table.column("distance_km")
coords = np.column_stack([d * np.cos(angles), d * np.sin(angles)])

w = build_weights(coords, "knn:4,row")
res = morans_i(table.column("shelter_2016"), w, permutations=999, seed=1)
print(f"Moran's I {res.statistic:.4f}, p={res.p_value:.3f} ({res.detail})")

###############################################################################
# The same seed always gives the same p-value.

again = morans_i(table.column("shelter_2016"), w, permutations=999, seed=1)
assert again == res
print("Ryan-Joiner on shelter 2016:", ryan_joiner(table.column("shelter_2016")).p_label)
