"""Core domain types for multi-explainer feature attributions.

An :class:`Explanation` is one explainer's ranked, signed attribution list
for a single predicted instance; an :class:`ExplanationSet` bundles every
explainer's explanation for that instance. Rank is the 1-based list
position. A feature absent from an explainer's list counts as ranked n+1
with a neutral sign, where n is the size of the set's feature universe.

All types are immutable after construction and safe for concurrent reads.
Invariant checking lives in :func:`validate`, which reports findings
instead of raising so that callers decide what is fatal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping

ERROR = "error"
WARNING = "warning"


class Sign(enum.Enum):
    """Direction of a feature's contribution: positive, negative, or neutral."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"

    @property
    def glyph(self) -> str:
        return _GLYPHS[self]

    def __str__(self) -> str:
        return self.value


_GLYPHS = {Sign.POSITIVE: "+", Sign.NEGATIVE: "-", Sign.NEUTRAL: "0"}

# Reporting order only; signs carry no arithmetic.
SIGN_ORDER = (Sign.POSITIVE, Sign.NEGATIVE, Sign.NEUTRAL)


def derive_sign(weight: float, neutral_eps: float = 0.0) -> Sign:
    """Classify an attribution weight.

    Neutral iff ``|weight| <= neutral_eps``, otherwise the arithmetic sign
    decides. Non-finite weights are rejected.
    """
    if not isinstance(weight, (int, float)) or not math.isfinite(weight):
        raise ValueError(f"attribution weight must be a finite number, got {weight!r}")
    if not math.isfinite(neutral_eps) or neutral_eps < 0:
        raise ValueError(f"neutral_eps must be a non-negative finite number, got {neutral_eps!r}")
    if abs(weight) <= neutral_eps:
        return Sign.NEUTRAL
    return Sign.POSITIVE if weight > 0 else Sign.NEGATIVE


@dataclass(frozen=True)
class FeatureAttribution:
    """One feature's signed weight within a single explanation."""

    feature: str
    weight: float
    extra: Mapping[str, Any] = field(default_factory=dict)

    def sign(self, neutral_eps: float = 0.0) -> Sign:
        return derive_sign(self.weight, neutral_eps)


@dataclass(frozen=True)
class Explanation:
    """One explainer's ordered attribution list; list position is the rank.

    The ingested order is authoritative for rank even if weights are not
    sorted; :func:`validate` flags unsorted input with a warning.
    """

    explainer: str
    attributions: tuple[FeatureAttribution, ...]
    extra: Mapping[str, Any] = field(default_factory=dict)

    @cached_property
    def features(self) -> tuple[str, ...]:
        return tuple(a.feature for a in self.attributions)

    @cached_property
    def _positions(self) -> dict[str, int]:
        # First occurrence wins for (invalid) duplicate features.
        positions: dict[str, int] = {}
        for i, a in enumerate(self.attributions):
            positions.setdefault(a.feature, i + 1)
        return positions

    @cached_property
    def _weights(self) -> dict[str, float]:
        weights: dict[str, float] = {}
        for a in self.attributions:
            weights.setdefault(a.feature, a.weight)
        return weights

    def __len__(self) -> int:
        return len(self.attributions)

    def rank_of(self, feature: str) -> int | None:
        """1-based rank of ``feature``, or None if this explainer omits it."""
        return self._positions.get(feature)

    def weight_of(self, feature: str) -> float | None:
        return self._weights.get(feature)

    def sign_of(self, feature: str, neutral_eps: float = 0.0) -> Sign:
        """Sign of ``feature`` here; an omitted feature is Neutral."""
        weight = self._weights.get(feature)
        if weight is None:
            return Sign.NEUTRAL
        return derive_sign(weight, neutral_eps)


def top_k(explanation: Explanation, k: int) -> tuple[str, ...]:
    """First ``min(k, len)`` features in rank order."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return explanation.features[:k]


@dataclass(frozen=True)
class ExplanationSet:
    """All explainers' explanations for one predicted instance."""

    instance_id: str
    prediction_label: str
    explanations: tuple[Explanation, ...]
    prediction_score: float | None = None
    extra: Mapping[str, Any] = field(default_factory=dict)

    @cached_property
    def feature_universe(self) -> frozenset[str]:
        """Union of features over all explanations."""
        return frozenset(f for e in self.explanations for f in e.features)

    @property
    def universe_size(self) -> int:
        return len(self.feature_universe)

    @cached_property
    def explainer_names(self) -> tuple[str, ...]:
        return tuple(e.explainer for e in self.explanations)

    @cached_property
    def _by_explainer(self) -> dict[str, Explanation]:
        return {e.explainer: e for e in self.explanations}

    def explanation_for(self, explainer: str) -> Explanation:
        try:
            return self._by_explainer[explainer]
        except KeyError:
            raise KeyError(f"unknown explainer {explainer!r} in instance {self.instance_id!r}") from None

    def rank_in(self, explainer: str, feature: str) -> int:
        """Rank of ``feature`` for ``explainer``; omitted features rank n+1."""
        rank = self.explanation_for(explainer).rank_of(feature)
        return rank if rank is not None else self.universe_size + 1

    def sign_in(self, explainer: str, feature: str, neutral_eps: float = 0.0) -> Sign:
        return self.explanation_for(explainer).sign_of(feature, neutral_eps)

    def mean_rank(self, feature: str) -> float:
        """Mean over explainers of the feature's rank (omitted = n+1).

        Integer ranks sum exactly, so the value is independent of the
        explainer order in the document.
        """
        missing = self.universe_size + 1
        total = 0
        for e in self.explanations:
            rank = e.rank_of(feature)
            total += rank if rank is not None else missing
        return total / len(self.explanations)


@dataclass(frozen=True)
class Finding:
    """One validation finding; ``severity`` is ``"error"`` or ``"warning"``."""

    severity: str
    code: str
    message: str
    instance_id: str | None = None
    explainer: str | None = None
    feature: str | None = None


class ValidationError(ValueError):
    """Raised when an operation rejects a set due to error-level findings."""

    def __init__(self, findings: list[Finding]):
        self.findings = findings
        lines = "; ".join(f"{f.code}: {f.message}" for f in findings)
        super().__init__(f"invalid explanation set: {lines}")


def has_errors(findings: list[Finding]) -> bool:
    return any(f.severity == ERROR for f in findings)


def validate(explanation_set: ExplanationSet) -> list[Finding]:
    """Check every type invariant; returns one finding per violation.

    An empty list means the set is fully well-formed. Unsorted attribution
    weights yield a warning, not an error: the ingested order stays
    authoritative for rank.
    """
    findings: list[Finding] = []
    sid = explanation_set.instance_id

    def err(code: str, message: str, explainer: str | None = None, feature: str | None = None) -> None:
        findings.append(Finding(ERROR, code, message, sid, explainer, feature))

    def warn(code: str, message: str, explainer: str | None = None) -> None:
        findings.append(Finding(WARNING, code, message, sid, explainer))

    if not sid:
        err("empty_instance_id", "instance_id must be a non-empty identifier")

    if len(explanation_set.explanations) < 2:
        err(
            "too_few_explainers",
            f"an explanation set needs at least 2 explanations, got {len(explanation_set.explanations)}",
        )

    seen_explainers: set[str] = set()
    for explanation in explanation_set.explanations:
        name = explanation.explainer
        if not name:
            err("empty_explainer_name", "explainer identifier must be non-empty")
        elif name in seen_explainers:
            err("duplicate_explainer", f"explainer {name!r} appears more than once", explainer=name)
        seen_explainers.add(name)

        seen_features: set[str] = set()
        for attribution in explanation.attributions:
            feat = attribution.feature
            if not feat:
                err("empty_feature_name", "feature identifier must be non-empty", explainer=name)
            elif feat in seen_features:
                err(
                    "duplicate_feature",
                    f"feature {feat!r} appears more than once in explanation {name!r}",
                    explainer=name,
                    feature=feat,
                )
            seen_features.add(feat)
            if not isinstance(attribution.weight, (int, float)) or not math.isfinite(attribution.weight):
                err(
                    "non_finite_weight",
                    f"weight of {feat!r} in {name!r} must be finite, got {attribution.weight!r}",
                    explainer=name,
                    feature=feat,
                )

        magnitudes = [
            abs(a.weight)
            for a in explanation.attributions
            if isinstance(a.weight, (int, float)) and math.isfinite(a.weight)
        ]
        if any(a < b for a, b in zip(magnitudes, magnitudes[1:])):
            warn(
                "unsorted_weights",
                f"attributions of {name!r} are not ordered by non-increasing |weight|; "
                "list order stays authoritative for rank",
                explainer=name,
            )

    if explanation_set.explanations and not explanation_set.feature_universe:
        err("empty_feature_universe", "the union of features over all explanations is empty")

    score = explanation_set.prediction_score
    if score is not None and (
        not isinstance(score, (int, float)) or not math.isfinite(score) or not 0.0 <= score <= 1.0
    ):
        err("invalid_prediction_score", f"prediction score must lie in [0, 1], got {score!r}")

    return findings
