import xml.etree.ElementTree as ET

import numpy as np
import pandas as pd
import pytest

from nowcast.report import ChartSpec, UnknownColumnError, chart_overlay, missing_columns, render_chart

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def table():
    index = pd.date_range("2021-04-20", periods=10, freq="D", name="date")
    rt = np.linspace(2.4, 0.9, 10)
    return pd.DataFrame(
        {
            "rt_mode": rt,
            "hdi_low": rt - 0.3,
            "hdi_high": rt + 0.3,
            "stringency_index": [30.56] * 4 + [91.67] * 6,
            "C6": [0, 0, 0, 0, 3, 3, np.nan, 3, 3, 3],
            "trend:lockdown": [np.nan] * 3 + [40, np.nan, np.nan, 100, np.nan, np.nan, 12],
        },
        index=index,
    )


@pytest.fixture
def spec():
    return ChartSpec(
        name="rt-vs-policy",
        title="R and stringency",
        left=("rt_mode",),
        band=("hdi_low", "hdi_high"),
        right=("stringency_index", "C6"),
        right_limits=(0.0, 100.0),
        reference_line=1.0,
    )


def test_output_is_svg(table, spec):
    svg = chart_overlay(table, spec)
    root = ET.fromstring(svg.encode("utf-8"))
    assert root.tag == SVG_NS + "svg"
    assert "R and stringency" in svg
    assert "2021-04-2" in svg


def test_identical_input_gives_identical_bytes(table, spec, tmp_path):
    first = render_chart(table, spec, tmp_path / "a.svg").read_bytes()
    second = render_chart(table, spec, tmp_path / "b.svg").read_bytes()
    assert first == second


def test_unknown_column(table):
    bad = ChartSpec(name="bad", left=("rt_mode", "deaths"))
    with pytest.raises(UnknownColumnError) as info:
        chart_overlay(table, bad)
    assert info.value.column == "deaths"
    assert missing_columns(table, bad) == ["deaths"]


def test_patterns_expand_to_matching_columns(table):
    svg = chart_overlay(table, ChartSpec(name="trends", left=("trend:*",)))
    assert "lockdown" in svg
    with pytest.raises(UnknownColumnError):
        chart_overlay(table, ChartSpec(name="trends", left=("mobility:*",)))


def test_empty_table_renders_placeholder(spec):
    empty = pd.DataFrame(index=pd.DatetimeIndex([], name="date"))
    svg = chart_overlay(empty, spec)
    assert "no data" in svg
    ET.fromstring(svg.encode("utf-8"))


def test_preset_from_dict():
    spec = ChartSpec.from_dict("fig2", {"left": ["rt_mode"], "band": ["hdi_low", "hdi_high"], "right_limits": [0, 100]})
    assert spec.left == ("rt_mode",)
    assert spec.band == ("hdi_low", "hdi_high")
    assert spec.right_limits == (0.0, 100.0)
    with pytest.raises(ValueError):
        ChartSpec.from_dict("fig2", {"colour": "red"})
    with pytest.raises(ValueError):
        ChartSpec.from_dict("fig2", {"band": ["hdi_low"]})
