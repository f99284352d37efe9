from .document import AnalysisReport, emit_report, report_document
from .svg import render_curve, render_portrait, render_return_map, render_series
