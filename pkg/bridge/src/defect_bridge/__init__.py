"""Desk-scale defect-prediction pipeline with multi-explainer export.

Trains a gradient-boosted classifier on a prepared metric table and
exports, per predicted instance, three post-hoc attribution explanations
as "xmentor/1" documents for the aggregation engine. The engine is
consumed strictly through that file format and its CLI; nothing here
imports the engine library.
"""

from .prepare import PrepareConfig, PreparedData, prepare
from .export import ExportConfig, train_and_explain

__all__ = ["ExportConfig", "PrepareConfig", "PreparedData", "prepare", "train_and_explain"]
