import os
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from nowcast.rt_core import CaseSeries, RtGrid

ARCHIVE_FILES = ("owid.csv", "oxcgrt.csv", "mobility.csv")


def make_cases(counts, start="2021-01-01", label="test") -> CaseSeries:
    index = pd.date_range(start, periods=len(counts), freq="D")
    return CaseSeries(counts=pd.Series(np.asarray(counts, dtype=np.int64), index=index), source_label=label)


def geometric_counts(k0: float, r: float, days: int, serial_interval: float = 7.0):
    growth = np.exp((r - 1.0) / serial_interval)
    return np.rint(k0 * growth ** np.arange(days)).astype(np.int64)


@pytest.fixture
def small_grid():
    return RtGrid(r_min=0.0, r_max=6.0, n_points=121)


@pytest.fixture
def cache_dir(tmp_path):
    path = tmp_path / "cache"
    path.mkdir()
    return path


OWID_TEXT = """iso_code,continent,location,date,total_cases,new_cases,new_cases_smoothed
NPL,Asia,Nepal,2021-04-01,100,10,9.5
NPL,Asia,Nepal,2021-04-02,112,12,10.1
NPL,Asia,Nepal,2021-04-03,112,,10.4
NPL,Asia,Nepal,2021-04-05,130,18,12.0
NPL,Asia,Nepal,2021-04-06,125,-5,11.0
NPL,Asia,Nepal,2021-04-07,145,20,12.5
IND,Asia,India,2021-04-01,5000,900,880.0
IND,Asia,India,2021-04-02,6000,1000,910.0
"""

OXCGRT_HEADER = (
    "CountryName,CountryCode,RegionName,RegionCode,Jurisdiction,Date,"
    "C1_School closing,C1_Flag,C2_Workplace closing,C3_Cancel public events,C4_Restrictions on gatherings,"
    "C5_Close public transport,C6_Stay at home requirements,C6_Flag,C7_Restrictions on internal movement,"
    "C8_International travel controls,H7_Vaccination policy,StringencyIndex,StringencyIndexForDisplay"
)
OXCGRT_TEXT = OXCGRT_HEADER + """
Nepal,NPL,,,NAT_TOTAL,20210428,1,1,1,1,2,0,0,,1,3,2,30.56,30.56
Nepal,NPL,,,NAT_TOTAL,20210429,3,1,2,2,4,1,3,1,2,3,2,91.67,91.67
Nepal,NPL,,,NAT_TOTAL,20210430,3,1,2,2,4,1,3,1,2,3,9,91.67,
Nepal,NPL,Bagmati,NP_BA,STATE_TOTAL,20210429,0,0,0,0,0,0,0,,0,0,0,10.00,10.00
India,IND,,,NAT_TOTAL,20210429,2,1,1,1,1,1,1,1,1,1,1,70.00,70.00
"""

MOBILITY_HEADER = (
    "country_region_code,country_region,sub_region_1,sub_region_2,metro_area,iso_3166_2_code,census_fips_code,place_id,date,"
    "retail_and_recreation_percent_change_from_baseline,grocery_and_pharmacy_percent_change_from_baseline,"
    "parks_percent_change_from_baseline,transit_stations_percent_change_from_baseline,"
    "workplaces_percent_change_from_baseline,residential_percent_change_from_baseline"
)
MOBILITY_TEXT = MOBILITY_HEADER + """
NP,Nepal,,,,,,ChIJ,2021-04-26,10,70,5,50,20,0
NP,Nepal,,,,,,ChIJ,2021-04-27,12,75,6,52,22,1
NP,Nepal,,,,,,ChIJ,2021-04-28,14,81,7,56,24,2
NP,Nepal,,,,,,ChIJ,2021-04-30,-40,-21,-30,-41,-30,
NP,Nepal,Bagmati,,,NP-P3,,ChIJ2,2021-04-28,1,2,3,4,5,6
NP,Nepal,,,,,,ChIJ,2021-05-01,-45,-25,-35,-45,-35,250
"""

TRENDS_TEXT = """Category: All categories

Week,lockdown: (Nepal),covid vaccine: (Nepal)
2021-04-04,12,<1
2021-04-11,40,3
2021-04-18,100,5
2021-04-25,,7
"""


@pytest.fixture
def owid_csv(tmp_path) -> Path:
    path = tmp_path / "owid.csv"
    path.write_text(OWID_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def oxcgrt_csv(tmp_path) -> Path:
    path = tmp_path / "oxcgrt.csv"
    path.write_text(OXCGRT_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def mobility_csv(tmp_path) -> Path:
    path = tmp_path / "mobility.csv"
    path.write_text(MOBILITY_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def trends_csv(tmp_path) -> Path:
    path = tmp_path / "trends.csv"
    path.write_text(TRENDS_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def archive_dir() -> Path:
    root = os.getenv("RTWATCH_ARCHIVE_DIR")
    if not root or not all((Path(root) / name).exists() for name in ARCHIVE_FILES):
        pytest.skip("RTWATCH_ARCHIVE_DIR with owid.csv, oxcgrt.csv and mobility.csv is not available")
    return Path(root)
