"""Post-hoc figure rendering for nonlocal-Burgers run outputs."""

from .figures import (FigureKind, FigureSpec, SchemaError,
                      gradient_overlay_figure, read_fields, read_oracle,
                      read_record, read_report, read_summary, render,
                      sweep_trend_figure, waterfall_figure)

__version__ = "0.1.0"

__all__ = [
    "FigureKind", "FigureSpec", "SchemaError", "gradient_overlay_figure",
    "read_fields", "read_oracle", "read_record", "read_report", "read_summary",
    "render", "sweep_trend_figure", "waterfall_figure",
]
