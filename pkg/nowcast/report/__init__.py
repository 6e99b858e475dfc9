"""
Report outputs

Deterministic CSV / JSON-lines tables and SVG overlay charts.
"""

from .charts import ChartSpec, chart_overlay, missing_columns, render_chart
from .errors import ReportError, ReportWriteError, UnknownColumnError
from .index_page import write_index
from .tables import ESTIMATE_CSV_COLUMNS, emit_estimates, emit_joined, read_estimates

__all__ = [
    'ChartSpec',
    'chart_overlay',
    'render_chart',
    'missing_columns',
    'emit_estimates',
    'read_estimates',
    'emit_joined',
    'write_index',
    'ESTIMATE_CSV_COLUMNS',
    'ReportError',
    'ReportWriteError',
    'UnknownColumnError',
]
