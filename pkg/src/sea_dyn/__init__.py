"""
sea-dyn: steepest-entropy-ascent dynamics of few-level quantum systems.

Domain modules live under `sea_dyn.modules`; `app`, `db` and `models` hold the
HTTP run service and its registry, `cli` the command-line entry point.
"""

__version__ = "1.0.0"
