"""
rtwatch: real-time R_t estimation with policy, mobility and search-interest overlays.

Subpackages:
    rt_core     grid Bayesian filter for R_t
    ingest      snapshot cache and source parsers
    sim_oracle  branching-process simulator for ground-truth checks
    report      CSV / JSON-lines tables and SVG charts
"""

__version__ = "0.1.0"
