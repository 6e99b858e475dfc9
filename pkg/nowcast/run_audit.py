"""
Local run audit for CLI commands.

Each command runs inside ``run_context``. The audit collects the config
echo, snapshot digests, seed, chosen sigma, flagged dates and the outcome.
On exit it is written next to the outputs as a metadata JSON (when a path
is given) and appended to a JSONL run log.
"""

from __future__ import annotations

import json
import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Union

logger = logging.getLogger(__name__)

_WRITE_LOCK = threading.Lock()


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass
class RunAudit:
    command: str
    arguments: Dict[str, Any] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)
    started_at: str = field(default_factory=_utc_now_iso)
    snapshots: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    seed: Optional[int] = None
    sigma: Dict[str, float] = field(default_factory=dict)
    flagged_dates: Dict[str, List[str]] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)
    result: str = "pending"
    reason: Optional[str] = None

    def record_snapshot(self, snapshot) -> None:
        self.snapshots[snapshot.source] = snapshot.to_dict()

    def record_estimate(self, key: str, estimate) -> None:
        self.sigma[key] = float(estimate.sigma)
        self.flagged_dates[key] = sorted(pd_date.strftime("%Y-%m-%d") for pd_date in estimate.flagged)

    def record_output(self, path: Union[str, Path]) -> None:
        self.outputs.append(str(path))

    def finish(self, result: str, *, reason: Optional[str] = None) -> None:
        self.result = result
        if reason is not None:
            self.reason = reason

    def metadata(self) -> Dict[str, Any]:
        """Reproduction record; carries no wall-clock fields."""
        return {
            "command": self.command,
            "arguments": self.arguments,
            "config": self.config,
            "snapshots": dict(sorted(self.snapshots.items())),
            "seed": self.seed,
            "sigma": dict(sorted(self.sigma.items())),
            "flagged_dates": dict(sorted(self.flagged_dates.items())),
            "outputs": list(self.outputs),
            **self.extra,
        }

    def to_dict(self) -> Dict[str, Any]:
        record = self.metadata()
        record.update({"started_at": self.started_at, "result": self.result, "reason": self.reason})
        return record


def write_metadata(audit: RunAudit, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(audit.metadata(), handle, indent=2, sort_keys=True, default=str)
        handle.write("\n")
    return path


def _append_run_record(audit: RunAudit, log_path: Path) -> None:
    log_path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(audit.to_dict(), sort_keys=True, default=str)
    with _WRITE_LOCK:
        with log_path.open("a", encoding="utf-8") as handle:
            handle.write(payload)
            handle.write("\n")


@contextmanager
def run_context(
    command: str,
    *,
    arguments: Optional[Dict[str, Any]] = None,
    config: Optional[Dict[str, Any]] = None,
    log_path: Optional[Union[str, Path]] = None,
) -> Iterator[RunAudit]:
    audit = RunAudit(command=command, arguments=dict(arguments or {}), config=dict(config or {}))
    try:
        yield audit
    except BaseException as exc:
        if audit.result == "pending":
            audit.finish("failed", reason=str(exc) or type(exc).__name__)
        raise
    finally:
        if audit.result == "pending":
            audit.finish("ok")
        if log_path is not None:
            try:
                _append_run_record(audit, Path(log_path))
            except OSError as exc:
                logger.warning("Could not append run record to %s: %s", log_path, exc)
