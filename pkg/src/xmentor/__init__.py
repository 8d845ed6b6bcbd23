"""Rank-aware aggregation and disagreement metrics for feature attributions."""

from .aggregate import (
    AggregatedExplanation,
    AggregatedFeature,
    AggregationConfig,
    DEFAULT_CONFIG,
    SignProfile,
    StageTrace,
    aggregate,
    threshold_k,
)
from .metrics import (
    DisagreementReport,
    PairMetrics,
    PairRecord,
    PairwiseMatrix,
    corpus_histograms,
    disagreement_counts,
    feature_agreement,
    pair_metrics,
    pairwise_matrix,
    rank_agreement,
    sign_agreement,
)
from .model import (
    Explanation,
    ExplanationSet,
    FeatureAttribution,
    Finding,
    Sign,
    ValidationError,
    derive_sign,
    top_k,
    validate,
)
from .synth import GeneratorSpec, Perturbation, generate

__version__ = "0.1.0"

__all__ = [
    "AggregatedExplanation",
    "AggregatedFeature",
    "AggregationConfig",
    "DEFAULT_CONFIG",
    "DisagreementReport",
    "Explanation",
    "ExplanationSet",
    "FeatureAttribution",
    "Finding",
    "GeneratorSpec",
    "PairMetrics",
    "PairRecord",
    "PairwiseMatrix",
    "Perturbation",
    "Sign",
    "SignProfile",
    "StageTrace",
    "ValidationError",
    "aggregate",
    "corpus_histograms",
    "derive_sign",
    "disagreement_counts",
    "feature_agreement",
    "generate",
    "pair_metrics",
    "pairwise_matrix",
    "rank_agreement",
    "sign_agreement",
    "threshold_k",
    "top_k",
    "validate",
]
