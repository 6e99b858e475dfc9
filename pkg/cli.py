"""
rtwatch command line: fetch, estimate, simulate, report.

Exit codes: 0 success, 2 source/network failure, 3 data problem, 64 usage.
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from config import LOG_LEVEL, RUN_LOG, ConfigError, RunConfig, load_config
from nowcast.ingest import (
    SOURCES,
    CorruptSnapshotError,
    IngestError,
    SnapshotCache,
    SourceUnavailableError,
    fetch_source,
    join_daily,
    moving_average,
    parse_mobility,
    parse_owid,
    parse_oxcgrt,
    parse_trends,
    read_case_series,
    write_case_series,
)
from nowcast.report import (
    ChartSpec,
    ReportError,
    UnknownColumnError,
    emit_estimates,
    emit_joined,
    missing_columns,
    read_estimates,
    render_chart,
    write_index,
)
from nowcast.rt_core import AUTO, EstimationError, estimate_rt
from nowcast.run_audit import run_context, write_metadata
from nowcast.sim_oracle import (
    DETERMINISTIC_MEAN,
    SCENARIO_NAMES,
    STOCHASTIC,
    SimConfig,
    get_scenario,
    read_trajectory,
    simulate_cases,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SOURCE = 2
EXIT_DATA = 3
EXIT_USAGE = 64

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class UsageError(Exception):
    """Bad combination of arguments found after parsing."""


class RtwatchArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (SourceUnavailableError, CorruptSnapshotError)):
        return EXIT_SOURCE
    if isinstance(exc, (UsageError, ConfigError, UnknownColumnError)):
        return EXIT_USAGE
    if isinstance(exc, (EstimationError, IngestError, ReportError, FileNotFoundError, ValueError)):
        return EXIT_DATA
    return 1


def _run_log(args, config: RunConfig) -> Path:
    return Path(args.run_log or RUN_LOG or Path(config.report.out_dir) / "run_log.jsonl")


def _cache_dir(args, config: RunConfig) -> Path:
    return Path(args.cache_dir or config.sources.cache_dir)


def _out_dir(args, config: RunConfig) -> Path:
    return Path(getattr(args, "out", None) or config.report.out_dir)


def _arguments(args) -> Dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k != "handler"}


# fetch


def cmd_fetch(args, config: RunConfig) -> Dict[str, Any]:
    sources = list(dict.fromkeys(args.sources or SOURCES))
    unknown = [s for s in sources if s not in SOURCES]
    if unknown:
        raise UsageError(f"unknown source {unknown[0]!r}; choose from {', '.join(SOURCES)}")
    cache_dir = _cache_dir(args, config)

    def fetch_one(source):
        return fetch_source(
            source,
            cache_dir,
            refresh=args.refresh,
            url=config.sources.urls.get(source),
            timeout=config.sources.http_timeout,
        )

    with run_context("fetch", arguments=_arguments(args), config=config.to_dict(), log_path=_run_log(args, config)) as audit:
        results: Dict[str, Any] = {}
        errors: Dict[str, BaseException] = {}
        with ThreadPoolExecutor(max_workers=len(sources)) as pool:
            futures = {source: pool.submit(fetch_one, source) for source in sources}
            for source, future in futures.items():
                try:
                    results[source] = future.result()
                except IngestError as exc:
                    errors[source] = exc

        for source in sources:
            if source in results:
                snapshot = results[source]
                audit.record_snapshot(snapshot)
                state = "cached" if snapshot.from_cache else "fetched"
                print(f"{source}: {state} snapshot {Path(snapshot.path).name} (sha256 {snapshot.digest[:12]})")
            else:
                print(f"{source}: {errors[source]}", file=sys.stderr)

        stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%fZ")
        meta_path = write_metadata(audit, _out_dir(args, config) / f"fetch_{stamp}.json")

        if errors:
            first = next(iter(errors.values()))
            audit.finish("failed", reason="; ".join(str(e) for e in errors.values()))
            return {
                "success": False,
                "exit_code": exit_code_for(first),
                "snapshots": results,
                "errors": errors,
                "metadata": meta_path,
            }
        return {"success": True, "exit_code": EXIT_OK, "snapshots": results, "errors": {}, "metadata": meta_path}


# estimate


def _estimator_config(args, config: RunConfig):
    estimator = config.estimator
    if args.sigma is not None:
        estimator = replace(estimator, sigma=AUTO if args.sigma == AUTO else float(args.sigma))
    if args.hdi_mass is not None:
        estimator = replace(estimator, hdi_mass=args.hdi_mass)
    return estimator


def cmd_estimate(args, config: RunConfig) -> Dict[str, Any]:
    if not args.country and not args.input:
        raise UsageError("give --country ISO (repeatable) or --input cases.csv")
    out_dir = _out_dir(args, config)
    estimator = _estimator_config(args, config)
    run_config = replace(config, estimator=estimator).to_dict()

    with run_context("estimate", arguments=_arguments(args), config=run_config, log_path=_run_log(args, config)) as audit:
        jobs = []
        if args.input:
            path = Path(args.input)
            jobs.append((path.stem, lambda: read_case_series(path)))
        if args.country:
            snapshot = SnapshotCache(_cache_dir(args, config)).require_latest("owid")
            audit.record_snapshot(snapshot)
            for iso in dict.fromkeys(c.strip().upper() for c in args.country):
                jobs.append((iso, lambda iso=iso: parse_owid(snapshot, iso)))

        written: Dict[str, List[Path]] = {}
        for key, load in jobs:
            series = load()
            estimate = estimate_rt(series, estimator)
            audit.record_estimate(key, estimate)
            audit.extra.setdefault("case_flags", {})[key] = len(series.flags)
            csv_path = emit_estimates(estimate, out_dir / f"{key}_estimates.csv")
            audit.record_output(csv_path)
            meta_path = write_metadata(audit, out_dir / f"{key}_estimates.json")
            written[key] = [csv_path, meta_path]
            print(
                f"{key}: {len(estimate)} day(s) {estimate.frame.index[0]:%Y-%m-%d}..{estimate.frame.index[-1]:%Y-%m-%d}, "
                f"sigma={estimate.sigma:g}, flagged={len(estimate.flagged)} -> {csv_path}"
            )
        return {"success": True, "exit_code": EXIT_OK, "outputs": written}


# simulate


def cmd_simulate(args, config: RunConfig) -> Dict[str, Any]:
    if args.traj:
        trajectory = read_trajectory(args.traj)
        sim_config = None
    else:
        trajectory, sim_config = get_scenario(args.scenario, seed=args.seed)

    base = sim_config or SimConfig(seed=args.seed)
    sim_config = replace(
        base,
        seed=args.seed,
        mode=args.mode or base.mode,
        k0=args.k0 if args.k0 is not None else base.k0,
    )
    out_path = Path(args.out or _out_dir(args, config) / f"sim_{trajectory.label}_seed{args.seed}.csv")

    with run_context("simulate", arguments=_arguments(args), config=sim_config.to_dict(), log_path=_run_log(args, config)) as audit:
        audit.seed = int(sim_config.seed)
        series = simulate_cases(trajectory, sim_config)
        write_case_series(series, out_path)
        truth_path = out_path.with_name(out_path.stem + ".truth.csv")
        truth = trajectory.true_r.rename("true_r").to_frame()
        truth.index = truth.index.strftime("%Y-%m-%d")
        truth.index.name = "date"
        truth_path.write_text(truth.to_csv(lineterminator="\n", float_format="%.10g"), encoding="utf-8")
        audit.record_output(out_path)
        audit.record_output(truth_path)
        audit.extra["trajectory"] = trajectory.label
        meta_path = write_metadata(audit, out_path.with_suffix(".meta.json"))
        extinct = int(series.counts.iloc[-1]) == 0
        print(f"{trajectory.label}: {len(series)} day(s), seed={sim_config.seed}, mode={sim_config.mode}"
              f"{', extinct' if extinct else ''} -> {out_path}")
        return {"success": True, "exit_code": EXIT_OK, "outputs": [out_path, truth_path, meta_path]}


# report


def _figure_names(args, config: RunConfig) -> List[str]:
    requested = []
    for item in args.figures or ["all"]:
        requested.extend(part.strip() for part in item.split(",") if part.strip())
    if not requested or requested == ["all"]:
        return list(config.report.figures)
    unknown = [name for name in requested if name not in config.report.presets]
    if unknown:
        raise UsageError(f"unknown figure {unknown[0]!r}; presets are {', '.join(config.report.presets)}")
    return list(dict.fromkeys(requested))


def _prune(spec: ChartSpec, missing: List[str]) -> ChartSpec:
    band = spec.band if spec.band and not set(spec.band) & set(missing) else None
    return replace(
        spec,
        left=tuple(c for c in spec.left if c not in missing),
        right=tuple(c for c in spec.right if c not in missing),
        band=band,
    )


def _optional_source(cache: SnapshotCache, source: str, audit):
    snapshot = cache.latest(source)
    if snapshot is None:
        logger.warning("No cached %s snapshot; its columns will be empty (run `fetch %s`)", source, source)
        return None
    audit.record_snapshot(snapshot)
    return snapshot


def build_report_table(args, config: RunConfig, audit) -> pd.DataFrame:
    iso = args.country.strip().upper()
    estimates_path = Path(args.estimates or _out_dir(args, config) / f"{iso}_estimates.csv")
    if not estimates_path.exists():
        raise FileNotFoundError(f"missing estimate file {estimates_path}; run `estimate --country {iso}` first")
    estimate = read_estimates(estimates_path)
    cache = SnapshotCache(_cache_dir(args, config))

    case = None
    owid = _optional_source(cache, "owid", audit)
    if owid is not None:
        case = parse_owid(owid, iso)

    policy = None
    oxcgrt = _optional_source(cache, "oxcgrt", audit)
    if oxcgrt is not None:
        policy = parse_oxcgrt(oxcgrt, iso)

    mobility_raw = mobility_avg = None
    mobility = _optional_source(cache, "mobility", audit)
    country_name = args.country_name or (case.location if case is not None else None)
    if mobility is not None and country_name:
        mobility_raw = parse_mobility(mobility, country_name, args.sub_region)
        mobility_avg = moving_average(mobility_raw, 7)
    elif mobility is not None:
        logger.warning("No country name for %s; pass --country-name to include mobility", iso)

    trends = None
    trends_csv = args.trends or config.sources.trends_csv
    if trends_csv:
        trends = parse_trends(trends_csv)

    return join_daily(case, estimate, policy, mobility_avg, mobility_raw=mobility_raw, trends=trends)


def cmd_report(args, config: RunConfig) -> Dict[str, Any]:
    figures = _figure_names(args, config)
    out_dir = _out_dir(args, config)
    iso = args.country.strip().upper()

    with run_context("report", arguments=_arguments(args), config=config.to_dict(), log_path=_run_log(args, config)) as audit:
        table = build_report_table(args, config, audit)
        tables = emit_joined(table, out_dir / f"{iso}_joined.csv", out_dir / f"{iso}_joined.jsonl")

        charts = []
        for name in figures:
            spec = config.report.presets[name]
            missing = missing_columns(table, spec) if not table.empty else []
            if missing:
                logger.warning("Chart %s: no data for %s", name, ", ".join(missing))
                spec = _prune(spec, missing)
            frame = table if spec.columns() else table.iloc[0:0]
            charts.append(render_chart(frame, spec, out_dir / f"{iso}_{name}.svg"))

        index = write_index(out_dir, charts, tables, title=f"R_t report: {iso}")
        for path in [*tables, *charts, index]:
            audit.record_output(path)
        write_metadata(audit, out_dir / f"{iso}_report.json")
        print(f"{iso}: {len(charts)} chart(s), {len(table)} joined row(s) -> {index}")
        return {"success": True, "exit_code": EXIT_OK, "charts": charts, "tables": tables, "index": index}


def build_parser() -> RtwatchArgumentParser:
    common = RtwatchArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration (default: rtwatch.toml or $RTWATCH_CONFIG)")
    common.add_argument("--cache-dir", help="snapshot cache directory (overrides $RTWATCH_CACHE_DIR)")
    common.add_argument("--run-log", help="JSONL run log to append to")
    common.add_argument("--log-level", help="logging level (default: $RTWATCH_LOG_LEVEL or INFO)")

    parser = RtwatchArgumentParser(prog="rtwatch", description="Real-time R_t estimation with policy and mobility overlays")
    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=RtwatchArgumentParser)
    commands.required = True

    fetch = commands.add_parser("fetch", parents=[common], help="download upstream CSVs into the snapshot cache")
    fetch.add_argument("sources", nargs="*", help=f"sources to fetch (default: all of {', '.join(SOURCES)})")
    fetch.add_argument("--refresh", action="store_true", help="download even when a snapshot is cached")
    fetch.set_defaults(handler=cmd_fetch)

    estimate = commands.add_parser("estimate", parents=[common], help="estimate daily R_t")
    estimate.add_argument("--country", action="append", help="ISO-3166 alpha-3 code (repeatable)")
    estimate.add_argument("--input", help="case series CSV (date,new_cases) instead of the OWID snapshot")
    estimate.add_argument("--out", help="output directory")
    estimate.add_argument("--sigma", help="fixed sigma or 'auto'")
    estimate.add_argument("--hdi-mass", type=float, help="credible-interval mass in (0, 1)")
    estimate.set_defaults(handler=cmd_estimate)

    simulate = commands.add_parser("simulate", parents=[common], help="simulate a case series from a known R_t path")
    source = simulate.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", choices=SCENARIO_NAMES)
    source.add_argument("--traj", help="trajectory CSV with columns date,true_r")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--mode", choices=(STOCHASTIC, DETERMINISTIC_MEAN))
    simulate.add_argument("--k0", type=float, help="initial daily case count")
    simulate.add_argument("--out", help="output CSV path")
    simulate.set_defaults(handler=cmd_simulate)

    report = commands.add_parser("report", parents=[common], help="joined table, SVG charts and index.html")
    report.add_argument("--country", required=True, help="ISO-3166 alpha-3 code")
    report.add_argument("--figures", action="append", help="'all' or comma-separated preset names")
    report.add_argument("--out", help="output directory")
    report.add_argument("--estimates", help="estimate CSV (default: <out>/<ISO>_estimates.csv)")
    report.add_argument("--trends", help="Google Trends CSV export")
    report.add_argument("--country-name", help="country name for the mobility report (default: OWID location)")
    report.add_argument("--sub-region", help="mobility sub_region_1 to select instead of the national rows")
    report.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.getLevelName((args.log_level or LOG_LEVEL).upper())
    if not isinstance(level, int):
        parser.error(f"unknown log level {args.log_level or LOG_LEVEL!r}")
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        config = load_config(args.config)
        result = args.handler(args, config)
    except Exception as exc:
        code = exit_code_for(exc)
        if code == 1:
            logger.exception("Unexpected failure in %s", args.command)
        print(f"rtwatch {args.command}: {exc}", file=sys.stderr)
        return code
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
