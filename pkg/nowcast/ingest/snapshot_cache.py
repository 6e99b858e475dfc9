"""
Append-only snapshot cache for upstream CSVs.

Layout: <cache_dir>/<source>/<timestamp>_<digest12>.csv plus
<cache_dir>/<source>/index.json listing every snapshot in fetch order.
Writes for one source are serialized; existing snapshots are never rewritten.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
from dataclasses import replace
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Dict, List, Optional, Union

import requests

from config import HTTP_TIMEOUT, SOURCE_URLS

from .errors import MissingSnapshotError, SourceUnavailableError
from .models import Snapshot, sha256_hex

logger = logging.getLogger(__name__)

SOURCES = ("owid", "oxcgrt", "mobility")
INDEX_FILE = "index.json"
_TIMESTAMP_FORMAT = "%Y%m%dT%H%M%S%fZ"
DOWNLOAD_CHUNK_BYTES = 1 << 16

_LOCKS: Dict[str, threading.Lock] = {}
_LOCKS_GUARD = threading.Lock()


def _source_lock(source_dir: Path) -> threading.Lock:
    key = str(source_dir.resolve())
    with _LOCKS_GUARD:
        return _LOCKS.setdefault(key, threading.Lock())


def _utc_stamp() -> str:
    return datetime.now(timezone.utc).strftime(_TIMESTAMP_FORMAT)


def _next_stamp(previous: Optional[str]) -> str:
    stamp = _utc_stamp()
    if previous and stamp <= previous:
        bumped = datetime.strptime(previous, _TIMESTAMP_FORMAT) + timedelta(microseconds=1)
        stamp = bumped.strftime(_TIMESTAMP_FORMAT)
    return stamp


class SnapshotCache:
    def __init__(self, cache_dir: Union[str, Path]):
        self.cache_dir = Path(cache_dir)

    def source_dir(self, source: str) -> Path:
        return self.cache_dir / source

    def load_index(self, source: str) -> List[Snapshot]:
        index_path = self.source_dir(source) / INDEX_FILE
        if not index_path.exists():
            return []
        entries = json.loads(index_path.read_text(encoding="utf-8"))
        return [
            Snapshot(
                source=entry["source"],
                fetched_at=entry["fetched_at"],
                digest=entry["digest"],
                path=self.source_dir(source) / entry["file"],
            )
            for entry in entries
        ]

    def _save_index(self, source: str, snapshots: List[Snapshot]) -> None:
        index_path = self.source_dir(source) / INDEX_FILE
        payload = [
            {"source": s.source, "fetched_at": s.fetched_at, "digest": s.digest, "file": Path(s.path).name}
            for s in snapshots
        ]
        tmp = index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        os.replace(tmp, index_path)

    def latest(self, source: str) -> Optional[Snapshot]:
        snapshots = self.load_index(source)
        return snapshots[-1] if snapshots else None

    def require_latest(self, source: str) -> Snapshot:
        snapshot = self.latest(source)
        if snapshot is None:
            raise MissingSnapshotError(source)
        return snapshot

    def _commit(self, source: str, part: Path, digest: str) -> Snapshot:
        """Move a fully written ``.part`` file into place and append it to the index."""
        source_dir = self.source_dir(source)
        with _source_lock(source_dir):
            snapshots = self.load_index(source)
            stamp = _next_stamp(snapshots[-1].fetched_at if snapshots else None)
            path = source_dir / f"{stamp}_{digest[:12]}.csv"
            os.replace(part, path)
            snapshot = Snapshot(source=source, fetched_at=stamp, digest=digest, path=path)
            snapshots.append(snapshot)
            self._save_index(source, snapshots)
        return snapshot

    def _part_file(self, source: str):
        source_dir = self.source_dir(source)
        source_dir.mkdir(parents=True, exist_ok=True)
        return tempfile.NamedTemporaryFile(dir=source_dir, suffix=".part", delete=False)

    def store(self, source: str, data: bytes) -> Snapshot:
        """Append ``data`` as a new snapshot of ``source``."""
        with self._part_file(source) as handle:
            handle.write(data)
        snapshot = self._commit(source, Path(handle.name), sha256_hex(data))
        logger.info("Stored %s snapshot %s (%d bytes)", source, snapshot.path.name, len(data))
        return snapshot

    def store_download(self, source: str, resp) -> Snapshot:
        """Stream a response body to disk, hashing as it arrives, and append it."""
        digest = hashlib.sha256()
        size = 0
        with self._part_file(source) as handle:
            part = Path(handle.name)
            try:
                for chunk in resp.iter_content(chunk_size=DOWNLOAD_CHUNK_BYTES):
                    if chunk:
                        handle.write(chunk)
                        digest.update(chunk)
                        size += len(chunk)
            except BaseException:
                handle.close()
                part.unlink(missing_ok=True)
                raise
        snapshot = self._commit(source, part, digest.hexdigest())
        logger.info("Stored %s snapshot %s (%d bytes)", source, snapshot.path.name, size)
        return snapshot


def _open_download(url: str, timeout: float, session: Optional[requests.Session]):
    getter = session.get if session is not None else requests.get
    resp = getter(url, timeout=timeout, stream=True)
    try:
        resp.raise_for_status()
    except requests.HTTPError:
        resp.close()
        raise
    return resp


def fetch_source(
    source: str,
    cache_dir: Union[str, Path],
    refresh: bool = False,
    *,
    url: Optional[str] = None,
    timeout: Optional[float] = None,
    session: Optional[requests.Session] = None,
) -> Snapshot:
    """
    Return a snapshot of ``source``, downloading only when needed.

    A warm cache is served without touching the network unless ``refresh``
    is set. A failed refresh falls back to the newest cached snapshot.
    """
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}; choose from {', '.join(SOURCES)}")

    cache = SnapshotCache(cache_dir)
    cached = cache.latest(source)
    if cached is not None and not refresh:
        cached.verify()
        logger.info("Using cached %s snapshot %s", source, Path(cached.path).name)
        return replace(cached, from_cache=True)

    url = url or SOURCE_URLS.get(source)
    if not url:
        raise SourceUnavailableError(source, "no URL configured")

    logger.info("Downloading %s from %s", source, url)
    try:
        resp = _open_download(url, timeout or HTTP_TIMEOUT, session)
        try:
            return cache.store_download(source, resp)
        finally:
            resp.close()
    except requests.RequestException as exc:
        if cached is None:
            raise SourceUnavailableError(source, str(exc)) from exc
        logger.warning("Refresh of %s failed (%s); keeping cached snapshot %s", source, exc, Path(cached.path).name)
        cached.verify()
        return replace(cached, from_cache=True)
