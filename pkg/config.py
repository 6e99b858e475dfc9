import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from dotenv import load_dotenv

from nowcast.report.charts import ChartSpec
from nowcast.rt_core.models import AUTO, EstimatorConfig, RtGrid, SerialIntervalParam

load_dotenv()

# Environment overrides (unset means "use the TOML value or the default")
CACHE_DIR = os.getenv("RTWATCH_CACHE_DIR")
CONFIG_PATH = os.getenv("RTWATCH_CONFIG")
LOG_LEVEL = os.getenv("RTWATCH_LOG_LEVEL", "INFO")
RUN_LOG = os.getenv("RTWATCH_RUN_LOG")
HTTP_TIMEOUT = float(os.getenv("RTWATCH_HTTP_TIMEOUT", "60"))

# Upstream sources
OWID_URL = os.getenv("OWID_URL", "https://covid.ourworldindata.org/data/owid-covid-data.csv")
OXCGRT_URL = os.getenv(
    "OXCGRT_URL",
    "https://raw.githubusercontent.com/OxCGRT/covid-policy-tracker/master/data/OxCGRT_latest.csv",
)
MOBILITY_URL = os.getenv("MOBILITY_URL", "https://www.gstatic.com/covid19/mobility/Global_Mobility_Report.csv")

SOURCE_URLS = {
    "owid": OWID_URL,
    "oxcgrt": OXCGRT_URL,
    "mobility": MOBILITY_URL,
}
_URL_ENV = {"owid": "OWID_URL", "oxcgrt": "OXCGRT_URL", "mobility": "MOBILITY_URL"}

# Defaults
DEFAULT_CONFIG_PATH = Path(CONFIG_PATH or "rtwatch.toml")
DEFAULT_CACHE_DIR = "cache"
DEFAULT_OUT_DIR = "out"

# One preset per published chart; rtwatch.toml may override any of them by name.
DEFAULT_PRESETS: Dict[str, Dict[str, Any]] = {
    "fig1": {
        "title": "Daily cases, stringency, residential mobility and stay-at-home orders",
        "left": ["new_cases", "new_cases_smoothed"],
        "right": ["stringency_index", "residential", "C6"],
        "left_label": "new cases",
        "right_label": "index / % change / level",
    },
    "fig2": {
        "title": "R-value and stringency index",
        "left": ["rt_mode"],
        "band": ["hdi_low", "hdi_high"],
        "right": ["stringency_index"],
        "left_label": "R_t",
        "right_label": "stringency index",
        "right_limits": [0, 100],
        "reference_line": 1.0,
    },
    "fig3": {
        "title": "Grocery and pharmacy mobility and internal movement restrictions",
        "left": ["grocery_pharmacy"],
        "right": ["C7"],
        "left_label": "% change from baseline",
        "right_label": "C7 level",
        "right_limits": [0, 2.5],
    },
    "fig4": {
        "title": "Transit station mobility, public transport closures and movement restrictions",
        "left": ["transit_stations"],
        "right": ["C5", "C7"],
        "left_label": "% change from baseline",
        "right_label": "policy level",
        "right_limits": [0, 2.5],
    },
    "fig5": {
        "title": "Workplace mobility, school closures and public transport closures",
        "left": ["workplaces"],
        "right": ["C1", "C5"],
        "left_label": "% change from baseline",
        "right_label": "policy level",
        "right_limits": [0, 3.5],
    },
    "fig6": {
        "title": "Search interest",
        "left": ["trend:*"],
        "left_label": "interest (0-100)",
    },
    "fig7": {
        "title": "R-value and containment policies",
        "left": ["rt_mode"],
        "band": ["hdi_low", "hdi_high"],
        "right": ["C1", "C3", "C4", "C6", "H7"],
        "left_label": "R_t",
        "right_label": "policy level",
        "right_limits": [0, 5.5],
        "reference_line": 1.0,
    },
}


class ConfigError(Exception):
    """Raised for malformed or unknown configuration."""


@dataclass(frozen=True)
class SourcesConfig:
    cache_dir: str = DEFAULT_CACHE_DIR
    urls: Mapping[str, str] = field(default_factory=lambda: dict(SOURCE_URLS))
    http_timeout: float = HTTP_TIMEOUT
    trends_csv: Optional[str] = None


@dataclass(frozen=True)
class ReportConfig:
    out_dir: str = DEFAULT_OUT_DIR
    figures: Tuple[str, ...] = tuple(DEFAULT_PRESETS)
    presets: Mapping[str, ChartSpec] = field(
        default_factory=lambda: {name: ChartSpec.from_dict(name, data) for name, data in DEFAULT_PRESETS.items()}
    )


@dataclass(frozen=True)
class RunConfig:
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    sources: SourcesConfig = field(default_factory=SourcesConfig)
    report: ReportConfig = field(default_factory=ReportConfig)
    path: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "path": self.path,
            "estimator": self.estimator.to_dict(),
            "sources": {
                "cache_dir": self.sources.cache_dir,
                "urls": dict(self.sources.urls),
                "http_timeout": self.sources.http_timeout,
                "trends_csv": self.sources.trends_csv,
            },
            "report": {"out_dir": self.report.out_dir, "figures": list(self.report.figures)},
        }


_ESTIMATOR_KEYS = {
    "r_min", "r_max", "n_points", "serial_interval_days", "sigma", "sigma_candidates",
    "window_days", "window_std", "leading_trim_cutoff", "hdi_mass", "use_source_smoothed",
    "initial_prior", "prior_gamma_shape", "lambda_floor", "round_smoothed",
}
_SOURCES_KEYS = {"cache_dir", "urls", "http_timeout", "trends_csv"}
_REPORT_KEYS = {"out_dir", "figures", "presets"}
_TOP_KEYS = {"estimator", "sources", "report"}


def _check_keys(section: str, data: Mapping[str, Any], allowed) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key {section + '.' if section else ''}{unknown[0]}")


def _estimator_config(data: Mapping[str, Any]) -> EstimatorConfig:
    _check_keys("estimator", data, _ESTIMATOR_KEYS)
    defaults = EstimatorConfig()
    grid = RtGrid(
        r_min=float(data.get("r_min", defaults.grid.r_min)),
        r_max=float(data.get("r_max", defaults.grid.r_max)),
        n_points=int(data.get("n_points", defaults.grid.n_points)),
    )
    sigma = data.get("sigma", defaults.sigma)
    if sigma != AUTO:
        sigma = float(sigma)
    kwargs = {
        key: data[key]
        for key in (
            "window_days", "window_std", "leading_trim_cutoff", "hdi_mass", "use_source_smoothed",
            "initial_prior", "prior_gamma_shape", "lambda_floor", "round_smoothed",
        )
        if key in data
    }
    if "sigma_candidates" in data:
        kwargs["sigma_candidates"] = tuple(float(s) for s in data["sigma_candidates"])
    return EstimatorConfig(
        grid=grid,
        serial=SerialIntervalParam(float(data.get("serial_interval_days", defaults.serial.serial_interval_days))),
        sigma=sigma,
        **kwargs,
    )


def _sources_config(data: Mapping[str, Any]) -> SourcesConfig:
    _check_keys("sources", data, _SOURCES_KEYS)
    urls = dict(SOURCE_URLS)
    toml_urls = data.get("urls", {})
    _check_keys("sources.urls", toml_urls, SOURCE_URLS)
    for source, url in toml_urls.items():
        # environment wins over the file
        if not os.getenv(_URL_ENV[source]):
            urls[source] = url
    timeout = HTTP_TIMEOUT if os.getenv("RTWATCH_HTTP_TIMEOUT") else float(data.get("http_timeout", HTTP_TIMEOUT))
    return SourcesConfig(
        cache_dir=CACHE_DIR or data.get("cache_dir", DEFAULT_CACHE_DIR),
        urls=urls,
        http_timeout=timeout,
        trends_csv=data.get("trends_csv") or None,
    )


def _report_config(data: Mapping[str, Any]) -> ReportConfig:
    _check_keys("report", data, _REPORT_KEYS)
    raw_presets = {name: dict(spec) for name, spec in DEFAULT_PRESETS.items()}
    for name, spec in data.get("presets", {}).items():
        raw_presets[name] = dict(spec)
    try:
        presets = {name: ChartSpec.from_dict(name, spec) for name, spec in raw_presets.items()}
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    figures = tuple(data.get("figures", tuple(raw_presets)))
    unknown = [name for name in figures if name not in presets]
    if unknown:
        raise ConfigError(f"unknown figure {unknown[0]!r}; presets are {', '.join(presets)}")
    return ReportConfig(out_dir=data.get("out_dir", DEFAULT_OUT_DIR), figures=figures, presets=presets)


def load_config(path=None) -> RunConfig:
    """
    Read the run configuration from a TOML file.

    A missing file gives the built-in defaults. Environment variables
    override file values; CLI flags are applied by the caller on top.
    """
    path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    data: Dict[str, Any] = {}
    if path.exists():
        try:
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc

    _check_keys("", data, _TOP_KEYS)
    try:
        estimator = _estimator_config(data.get("estimator", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"estimator: {exc}") from exc
    return RunConfig(
        estimator=estimator,
        sources=_sources_config(data.get("sources", {})),
        report=_report_config(data.get("report", {})),
        path=str(path) if path.exists() else None,
    )
