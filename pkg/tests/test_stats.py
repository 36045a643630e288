import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import stats as ss

from commute_frontier.errors import ConfigError, DegenerateError, DomainError, InsufficientDataError
from commute_frontier.stats import (
    build_weights,
    load_coords,
    morans_i,
    normal_scores,
    ryan_joiner,
    ryan_joiner_critical,
    weights_from_matrix,
)

# reference normality statistics and p-value bands for the community table
REFERENCE_RJ = {
    "income_2011": (0.942, "0.022"),
    "income_2016": (0.958, "0.068"),
    "shelter_2011": (0.939, "0.014"),
    "shelter_2016": (0.934, "<0.010"),
    "total_2011": (0.984, ">0.100"),
    "total_2016": (0.990, ">0.100"),
    "pct_2011": (0.981, ">0.100"),
    "pct_2016": (0.986, ">0.100"),
}


def test_normal_scores_match_scipy():
    n = 23
    i = np.arange(1, n + 1)
    assert np.allclose(normal_scores(n), ss.norm.ppf((i - 0.375) / (n + 0.25)), atol=1e-12)


@pytest.mark.parametrize("col", sorted(REFERENCE_RJ))
def test_ryan_joiner_table_values(table, col):
    stat, label = REFERENCE_RJ[col]
    res = ryan_joiner(table.column(col))
    assert res.statistic == pytest.approx(stat, abs=0.01)
    assert res.p_label == label


def test_ryan_joiner_driving_costs_are_annualized_invariant(table):
    # scaling by 12 leaves the correlation unchanged
    r1 = ryan_joiner(table.column("drive_2011")).statistic
    r12 = ryan_joiner(12 * table.column("drive_2011")).statistic
    assert r1 == pytest.approx(r12, abs=1e-14)
    assert r1 == pytest.approx(0.970, abs=0.01)


def test_ryan_joiner_is_correlation_with_scores():
    rng = np.random.default_rng(1)
    x = rng.exponential(size=30)
    oracle = np.corrcoef(np.sort(x), normal_scores(30))[0, 1]
    assert ryan_joiner(x).statistic == pytest.approx(oracle, abs=1e-13)


def test_ryan_joiner_perfect_scores():
    res = ryan_joiner(normal_scores(15)[::-1])
    assert res.statistic == pytest.approx(1.0, abs=1e-14)
    assert res.p_label == ">0.100"


def test_ryan_joiner_critical_ordering():
    for n in (5, 10, 23, 100):
        c = ryan_joiner_critical(n)
        assert c[0.01] < c[0.05] < c[0.10] < 1


def test_ryan_joiner_errors():
    with pytest.raises(InsufficientDataError):
        ryan_joiner([1, 2, 3])
    with pytest.raises(DegenerateError):
        ryan_joiner([2, 2, 2, 2, 2])
    with pytest.raises(DomainError):
        ryan_joiner([1, 2, np.nan, 4])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=5, max_size=40), st.floats(0.01, 100), st.floats(-1e3, 1e3))
def test_ryan_joiner_affine_invariance(x, a, c):
    x = np.array(x)
    assume(np.ptp(x) > 1e-3)
    r = ryan_joiner(x).statistic
    assert ryan_joiner(a * x + c).statistic == pytest.approx(r, abs=1e-9)


def test_knn_collinear():
    w = build_weights([(0, 0), (1, 0), (3, 0)], "knn:1")
    assert w.weights.tolist() == [[0, 1, 0], [1, 0, 0], [0, 1, 0]]


def test_two_points_symmetric():
    w = build_weights([(0, 0), (4, 3)], "inverse-distance:band=10")
    assert w.weights[0, 1] == w.weights[1, 0] == pytest.approx(0.2)
    assert w.weights[0, 0] == 0


def test_inverse_distance_matches_hand_computation():
    rng = np.random.default_rng(7)
    pts = rng.uniform(0, 120, (5, 2))
    w = build_weights(pts, "inverse-distance:band=100")
    for i, j in itertools.product(range(5), repeat=2):
        d = np.hypot(*(pts[i] - pts[j]))
        expect = 0.0 if i == j or d > 100 else 1.0 / d
        assert w.weights[i, j] == pytest.approx(expect, rel=1e-14)


def test_row_standardization_and_isolates():
    w = build_weights([(0, 0), (1, 0), (2, 0), (500, 0)], "inverse-distance:band=10,row")
    sums = w.weights.sum(axis=1)
    assert np.allclose(sums[:3], 1.0)
    assert w.isolated == (3,)


def test_coincident_points_flagged():
    w = build_weights([(0, 0), (0, 0), (5, 0)], "inverse-distance:band=10")
    assert w.coincident == ((0, 1),)
    assert w.weights[0, 1] == pytest.approx(1000.0)


@pytest.mark.parametrize("spec", ["grid:3", "knn:0", "knn:x", "inverse-distance:band=-1",
                                  "inverse-distance:band=5,bogus=1", "knn:9"])
def test_bad_specs(spec):
    with pytest.raises(ConfigError):
        build_weights([(0, 0), (1, 0), (2, 0), (3, 1)], spec)


def _brute_moran(x, w):
    n = len(x)
    m = sum(x) / n
    num = sum(w[i][j] * (x[i] - m) * (x[j] - m) for i in range(n) for j in range(n))
    den = sum((v - m) ** 2 for v in x)
    s0 = sum(map(sum, w))
    return n / s0 * num / den


@pytest.mark.parametrize("n", [4, 5, 6])
@pytest.mark.parametrize("spec", ["knn:2", "inverse-distance:band=80", "inverse-distance:band=80,row"])
def test_moran_matches_double_sum(n, spec):
    rng = np.random.default_rng(n)
    pts = rng.uniform(0, 100, (n, 2))
    x = rng.normal(1000, 200, n)
    w = build_weights(pts, spec)
    res = morans_i(x, w, permutations=0)
    assert res.statistic == pytest.approx(_brute_moran(list(x), w.weights.tolist()), abs=1e-12)


def test_moran_negative_on_bipartite_alternation():
    # 6-cycle, values alternate high/low around it
    w = np.zeros((6, 6))
    for i in range(6):
        w[i, (i + 1) % 6] = w[(i + 1) % 6, i] = 1
    res = morans_i([10, 0, 10, 0, 10, 0], weights_from_matrix(w), permutations=99)
    assert res.statistic == pytest.approx(-1.0)
    assert res.statistic < 0


def test_moran_seeded_determinism():
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 150, (23, 2))
    x = rng.normal(size=23)
    w = build_weights(pts, "knn:4")
    a = morans_i(x, w, 999, seed=42)
    b = morans_i(x, w, 999, seed=42)
    assert a == b
    assert 0 < a.p_value <= 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1000), st.floats(0.1, 50), st.floats(-100, 100))
def test_moran_affine_invariance(seed, a, c):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 100, (8, 2))
    x = rng.normal(size=8)
    w = build_weights(pts, "knn:3")
    r1 = morans_i(x, w, 49, seed=1)
    r2 = morans_i(a * x + c, w, 49, seed=1)
    assert r2.statistic == pytest.approx(r1.statistic, abs=1e-9)


def test_moran_errors():
    w = build_weights([(0, 0), (1, 0), (2, 0), (3, 0)], "knn:1")
    with pytest.raises(DomainError):
        morans_i([1, 2, 3], w)
    with pytest.raises(DegenerateError):
        morans_i([1, 1, 1, 1], w)
    iso = weights_from_matrix(np.zeros((4, 4)))
    with pytest.raises(DegenerateError):
        morans_i([1, 2, 3, 4], iso)


def test_load_coords(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("name,x_km,y_km\nA,0,0\nB,3,4\n", encoding="utf-8")
    assert load_coords(p) == {"A": (0.0, 0.0), "B": (3.0, 4.0)}
