"""Nepal 2021 figures reproduced from archived upstream snapshots."""

from datetime import date

import pytest

from nowcast.ingest import find_stringency_variant, moving_average, parse_mobility, parse_owid, parse_oxcgrt
from nowcast.rt_core import estimate_rt

pytestmark = pytest.mark.archive

WAVE_START, WAVE_END = date(2021, 4, 20), date(2021, 5, 10)


def _on(records, day):
    return next(r for r in records if r.date == day)


def test_rt_peak_and_trough(archive_dir):
    rt = estimate_rt(parse_owid(archive_dir / "owid.csv", "NPL")).frame["rt_mode"]
    assert 2.0 <= rt["2021-04-15":"2021-04-25"].max() <= 3.0
    assert 0.3 <= rt["2021-06-01":"2021-06-15"].min() <= 0.7


def test_lockdown_in_policy_tracker(archive_dir):
    records = parse_oxcgrt(archive_dir / "oxcgrt.csv", "NPL")
    assert find_stringency_variant(records, (30.56, 91.67), WAVE_START, WAVE_END) is not None
    c6 = [r.indicators["C6"] for r in records if WAVE_START <= r.date <= WAVE_END and r.indicators.get("C6") is not None]
    assert c6[0] == 0
    assert 3 in c6


@pytest.mark.parametrize(
    "day, category, expected, averaged",
    [
        (date(2021, 4, 28), "residential", 1.0, True),
        (date(2021, 5, 5), "residential", 19.0, True),
        (date(2021, 4, 28), "grocery_pharmacy", 81.0, False),
        (date(2021, 5, 5), "grocery_pharmacy", -21.0, False),
        (date(2021, 4, 28), "transit_stations", 56.0, False),
        (date(2021, 5, 5), "transit_stations", -41.0, False),
    ],
)
def test_mobility_anchors(archive_dir, day, category, expected, averaged):
    records = parse_mobility(archive_dir / "mobility.csv", "Nepal")
    if averaged:
        records = moving_average(records, 7)
    value = _on(records, day).categories[category]
    assert value == pytest.approx(expected, abs=2.0)
