"""
Print the published Nepal 2021 figures next to what the pipeline measures
on archived snapshots. Read-only: nothing is fetched or written.

Usage:
    python scripts/check_anchors.py --archive-dir /data/rtwatch-2021
"""

import argparse
import os
import sys
from datetime import date
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from nowcast.ingest import find_stringency_variant, moving_average, parse_mobility, parse_owid, parse_oxcgrt  # noqa: E402
from nowcast.rt_core import estimate_rt  # noqa: E402

ISO = "NPL"
COUNTRY_NAME = "Nepal"


def _value_on(records, day, category):
    for record in records:
        if record.date == day:
            return record.categories.get(category)
    return None


def _row(label, expected, measured, ok):
    shown = "n/a" if measured is None else (f"{measured:.3f}" if isinstance(measured, float) else str(measured))
    print(f"{'PASS' if ok else 'FAIL'}  {label:<48} expected {expected:<18} measured {shown}")
    return ok


def check_estimates(archive: Path) -> bool:
    estimate = estimate_rt(parse_owid(archive / "owid.csv", ISO)).frame["rt_mode"]
    peak = float(estimate["2021-04-15":"2021-04-25"].max())
    trough = float(estimate["2021-06-01":"2021-06-15"].min())
    ok = _row("peak R_t 2021-04-15..25", "2.480 in [2, 3]", peak, 2.0 <= peak <= 3.0)
    ok &= _row("lowest R_t 2021-06-01..15", "0.450 in [0.3, 0.7]", trough, 0.3 <= trough <= 0.7)
    return ok


def check_policy(archive: Path) -> bool:
    records = parse_oxcgrt(archive / "oxcgrt.csv", ISO)
    start, end = date(2021, 4, 20), date(2021, 5, 10)
    variant = find_stringency_variant(records, (30.56, 91.67), start, end)
    ok = _row("stringency 30.56 -> 91.67", "some variant", variant, variant is not None)
    c6 = [r.indicators.get("C6") for r in records if start <= r.date <= end]
    c6 = [v for v in c6 if v is not None]
    rises = bool(c6) and c6[0] == 0 and 3 in c6
    ok &= _row("C6 stay-at-home 0 -> 3", "0 -> 3", f"{c6[0]} -> {max(c6)}" if c6 else None, rises)
    return ok


def check_mobility(archive: Path) -> bool:
    raw = parse_mobility(archive / "mobility.csv", COUNTRY_NAME)
    averaged = moving_average(raw, 7)
    before, after = date(2021, 4, 28), date(2021, 5, 5)
    checks = [
        ("residential 7-day avg 2021-04-28", averaged, before, "residential", 1.0),
        ("residential 7-day avg 2021-05-05", averaged, after, "residential", 19.0),
        ("grocery/pharmacy 2021-04-28", raw, before, "grocery_pharmacy", 81.0),
        ("grocery/pharmacy 2021-05-05", raw, after, "grocery_pharmacy", -21.0),
        ("transit stations 2021-04-28", raw, before, "transit_stations", 56.0),
        ("transit stations 2021-05-05", raw, after, "transit_stations", -41.0),
    ]
    ok = True
    for label, records, day, category, expected in checks:
        value = _value_on(records, day, category)
        ok &= _row(label, f"{expected:g} +/- 2", value, value is not None and abs(value - expected) <= 2.0)
    return ok


def main():
    parser = argparse.ArgumentParser(description="Compare archived-snapshot measurements with the published Nepal figures")
    parser.add_argument("--archive-dir", default=os.getenv("RTWATCH_ARCHIVE_DIR"),
                        help="directory holding owid.csv, oxcgrt.csv and mobility.csv")
    args = parser.parse_args()

    if not args.archive_dir:
        print("Missing --archive-dir (or RTWATCH_ARCHIVE_DIR)", file=sys.stderr)
        sys.exit(1)
    archive = Path(args.archive_dir)
    missing = [name for name in ("owid.csv", "oxcgrt.csv", "mobility.csv") if not (archive / name).exists()]
    if missing:
        print(f"Archive {archive} lacks {', '.join(missing)}", file=sys.stderr)
        sys.exit(1)

    results = [check_estimates(archive), check_policy(archive), check_mobility(archive)]
    print("\nSummary")
    print(f"Groups passed: {sum(results)} of {len(results)}")
    sys.exit(0 if all(results) else 1)


if __name__ == "__main__":
    main()
