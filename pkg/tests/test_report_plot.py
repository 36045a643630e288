import json
import xml.etree.ElementTree as ET

import pytest

from commute_frontier import report
from commute_frontier.errors import DomainError, SchemaError
from commute_frontier.figures import cost_curves_figure, share_curves_figure
from commute_frontier.regress import fit_xy
from commute_frontier.svgplot import render_plot, series_csv

SVG = "{http://www.w3.org/2000/svg}"


def test_fmt_sig():
    assert report.fmt_sig(1352.8) == "1353"
    assert report.fmt_sig(-2.96172) == "-2.962"
    assert report.fmt_sig(0.000476) == "0.000476"


def test_model_text_layout(table):
    m = fit_xy(table.column("distance_km"), table.column("shelter_2011"), 1)
    lines = report.model_text(m).splitlines()
    assert lines[0].startswith("Linear Regression  r^2=0.446")
    assert lines[1].startswith("Constant  1353")
    assert "-2.962d" in lines[2]


def test_diagnostics_without_coords(table):
    rows = report.diagnostics(table)
    assert len(rows) == 10
    assert all(r.moran is None for r in rows)
    by_col = {r.column: r for r in rows}
    assert by_col["drive_2011"].mean == pytest.approx(11314, abs=1)
    assert by_col["income_2011"].ryan_joiner.p_label == "0.022"


def test_diagnostics_need_all_coords(table):
    with pytest.raises(SchemaError):
        report.diagnostics(table, coords={"Toronto - CMA": (0, 0)})


def test_diagnostics_with_coords_deterministic(table):
    coords = {n: (float(r.distance_km), float(i % 5) * 10) for i, (n, r) in
              enumerate(zip(table.names, table.records))}
    a = report.diagnostics(table, coords, "knn:4", permutations=199, seed=5)
    b = report.diagnostics(table, coords, "knn:4", permutations=199, seed=5)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    assert all(r.moran is not None for r in a)


def test_compare_years_deltas_exact(table):
    rows = report.compare_years(table)
    assert rows
    for r in rows:
        if r.v2011 is not None and r.v2016 is not None:
            assert r.delta == r.v2016 - r.v2011
        else:
            assert r.delta is None
    doc = json.loads(report.comparisons_json(rows))
    assert {"quantity", "2011", "2016", "delta"} == set(doc[0])
    by_q = {r.quantity: r for r in rows}
    # shelter curve shifted up and steepened
    assert by_q["shelter deg1 constant"].delta > 0
    assert by_q["shelter deg1 slope"].delta < 0


def test_render_single_point_is_valid_svg():
    svg = render_plot({"one": [(5.0, 3.0)]})
    root = ET.fromstring(svg.encode())
    assert root.tag == SVG + "svg" and root.get("version") == "1.1"
    assert len(root.findall(f"{SVG}circle")) == 1
    assert root.findall(f"{SVG}polyline") == []


def test_render_rejects_empty_and_non_finite():
    with pytest.raises(DomainError):
        render_plot({})
    with pytest.raises(DomainError):
        render_plot({"s": []})
    with pytest.raises(DomainError):
        render_plot({"s": [(0, 1), (1, float("nan"))]})


def test_cost_figure(table):
    series, guides, notes = cost_curves_figure(table)
    assert len(series) == 6
    assert [round(y, 2) for _, y in guides] == [1500.0, 1750.0, 2100.0, 2250.0]
    svg = render_plot(series, guides, notes)
    root = ET.fromstring(svg.encode())
    assert len(root.findall(f"{SVG}polyline")) == 6
    assert svg == render_plot(series, guides, notes)


def test_share_figure_crosses_42_near_130(table):
    series, guides, notes = share_curves_figure(table)
    assert set(series) == {"share 2011", "share 2016"}
    at42 = [x for label, x, y in notes if y == 42.0]
    assert len(at42) == 2
    assert all(x == pytest.approx(130, abs=5) for x in at42)


def test_series_csv():
    text = series_csv({"a": [(1.0, 2.0)], "b": [(3.0, 4.5)]})
    assert text == "series,x,y\na,1.0,2.0\nb,3.0,4.5\n"
