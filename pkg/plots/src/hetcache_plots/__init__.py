"""CSV-to-image batch renderer for the hetcache figure data sets."""
from .render import EXPECTED_COLUMNS, FigureJob, RenderSummary, SchemaMismatch, render

__all__ = ["EXPECTED_COLUMNS", "FigureJob", "RenderSummary", "SchemaMismatch",
           "render"]
