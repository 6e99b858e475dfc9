class ReportError(Exception):
    """Base class for output failures."""


class UnknownColumnError(ReportError):
    def __init__(self, column: str, chart: str = ""):
        self.column = column
        super().__init__(f"unknown column {column!r}{' in chart ' + chart if chart else ''}")


class ReportWriteError(ReportError):
    def __init__(self, path, detail: str = ""):
        self.path = path
        super().__init__(f"cannot write {path}{': ' + detail if detail else ''}")
