class IngestError(Exception):
    """Base class for fetch and parse failures."""


class SourceUnavailableError(IngestError):
    def __init__(self, source: str, detail: str = ""):
        self.source = source
        super().__init__(f"source unavailable: {source}{' (' + detail + ')' if detail else ''}")


class CorruptSnapshotError(IngestError):
    def __init__(self, path, expected: str, actual: str):
        self.path = path
        super().__init__(f"corrupt snapshot {path}: digest {actual[:12]} != {expected[:12]}")


class MissingSnapshotError(IngestError):
    """Raised when a command needs a cached snapshot that was never fetched."""

    def __init__(self, source: str):
        self.source = source
        super().__init__(f"no cached snapshot for {source}; run `fetch {source}` first")


class CountryNotFoundError(IngestError):
    def __init__(self, country: str, source: str = ""):
        self.country = country
        super().__init__(f"country not found: {country}{' in ' + source if source else ''}")


class SchemaDriftError(IngestError):
    def __init__(self, column: str, source: str = ""):
        self.column = column
        super().__init__(f"schema drift: {source + ' ' if source else ''}column {column!r} is missing")


class NotATrendsExportError(IngestError):
    def __init__(self, path, detail: str = ""):
        self.path = path
        super().__init__(f"not a trends export: {path}{' (' + detail + ')' if detail else ''}")
