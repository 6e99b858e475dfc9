from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Dict, Optional, Tuple

from .errors import CorruptSnapshotError

# Ordinal ranges of the OxCGRT indicators we parse.
INDICATOR_RANGES: Dict[str, Tuple[int, int]] = {
    "C1": (0, 3),  # school closing
    "C2": (0, 3),  # workplace closing
    "C3": (0, 2),  # cancel public events
    "C4": (0, 4),  # restrictions on gatherings
    "C5": (0, 2),  # close public transport
    "C6": (0, 3),  # stay at home requirements
    "C7": (0, 2),  # restrictions on internal movement
    "C8": (0, 4),  # international travel controls
    "H7": (0, 5),  # vaccination policy
}
REQUIRED_INDICATORS = ("C1", "C5", "C6", "C7", "C8", "H7")

MOBILITY_CATEGORIES = (
    "retail_recreation",
    "grocery_pharmacy",
    "parks",
    "transit_stations",
    "workplaces",
    "residential",
)
SUSPECT_MOBILITY = 200.0


HASH_CHUNK_BYTES = 1 << 20


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(HASH_CHUNK_BYTES), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass(frozen=True)
class Snapshot:
    source: str
    fetched_at: str
    digest: str
    path: Path
    from_cache: bool = field(default=False, compare=False)

    def verify(self) -> Path:
        """Re-hash the stored file in blocks; returns its path when the digest matches."""
        actual = file_sha256(self.path)
        if actual != self.digest:
            raise CorruptSnapshotError(self.path, self.digest, actual)
        return Path(self.path)

    def read_bytes(self) -> bytes:
        return self.verify().read_bytes()

    def to_dict(self) -> Dict[str, str]:
        return {
            "source": self.source,
            "fetched_at": self.fetched_at,
            "digest": self.digest,
            "path": str(self.path),
        }


@dataclass
class PolicyRecord:
    date: date
    stringency_index: Optional[float] = None
    stringency_variant: Optional[str] = None
    stringency_variants: Dict[str, Optional[float]] = field(default_factory=dict)
    indicators: Dict[str, Optional[int]] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()


@dataclass
class MobilityRecord:
    date: date
    categories: Dict[str, Optional[float]] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()


@dataclass
class TrendsRecord:
    date: date
    term: str
    interest: int
    flags: Tuple[str, ...] = ()
