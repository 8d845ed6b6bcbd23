"""Rank-aware aggregation of conflicting multi-explainer attributions.

The pipeline reconciles the ranked, signed attribution lists of several
explainers into one unified top-k explanation:

1. threshold: pick k adaptively from the feature-universe size n.
2. strict rank voting: walk ranks 1..n; at each rank the plurality feature
   is selected at that rank, every minority alternative is blacklisted.
3. loose rank fallback (only if fewer than k selected): restore every
   unselected feature, ordered by the rank where it was a plurality or by
   its mean rank if it never was one.
4. strict sign filter: keep candidates whose sign is unanimous across all
   explainers (an omitted feature counts as neutral).
5. loose sign fallback (only if fewer than k survive): keep candidates
   whose sign has a strict majority; features with no majority are dropped.
6. finalize: order by stage rank and trim to k.

Every stage is pure and deterministic. Tie-breaks never depend on the
explainer order in the document: plurality ties go to the smallest mean
rank, then the lexicographically smallest feature name.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import (
    ExplanationSet,
    Sign,
    ValidationError,
    has_errors,
    validate,
)

LOOSE_RANK = "loose_rank"
LOOSE_SIGN = "loose_sign"


class TieBreak(enum.Enum):
    """Tie-break policy for plurality and ordering ties."""

    MEAN_RANK_THEN_LEXICOGRAPHIC = "mean_rank_then_lexicographic"


@dataclass(frozen=True)
class AggregationConfig:
    """Threshold boundaries, neutral epsilon, and tie-break policy.

    Feature spaces of size <= ``small_max`` are "small", sizes up to
    ``moderate_max`` are "moderate", anything larger is "large"; each
    bucket has its own target explanation size k. Defaults map n=7 to k=5.
    """

    small_max: int = 6
    moderate_max: int = 15
    k_small: int = 3
    k_moderate: int = 5
    k_large: int = 10
    neutral_eps: float = 0.0
    tie_break: TieBreak = TieBreak.MEAN_RANK_THEN_LEXICOGRAPHIC

    def __post_init__(self) -> None:
        for name in ("small_max", "moderate_max", "k_small", "k_moderate", "k_large"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not self.small_max < self.moderate_max:
            raise ValueError("small_max must be strictly less than moderate_max")
        if not self.k_small <= self.k_moderate <= self.k_large:
            raise ValueError("thresholds must satisfy k_small <= k_moderate <= k_large")
        if not isinstance(self.neutral_eps, (int, float)) or not math.isfinite(self.neutral_eps) or self.neutral_eps < 0:
            raise ValueError(f"neutral_eps must be a non-negative finite number, got {self.neutral_eps!r}")


DEFAULT_CONFIG = AggregationConfig()


def threshold_k(n: int, config: AggregationConfig = DEFAULT_CONFIG) -> int:
    """Adaptive explanation size for a feature universe of size ``n``.

    Small spaces get ``k_small``, moderate ones ``k_moderate``, large ones
    ``k_large``; the result is clamped to n.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"feature-universe size must be a positive integer, got {n!r}")
    if n <= config.small_max:
        k = config.k_small
    elif n <= config.moderate_max:
        k = config.k_moderate
    else:
        k = config.k_large
    return min(k, n)


@dataclass(frozen=True)
class RankTally:
    """Vote tally at one rank position.

    ``votes`` maps each feature placed at this rank to the number of
    explainers placing it there; ``plurality`` is the winner after
    tie-breaking, None when no explainer ranks at this position.
    """

    rank: int
    votes: Mapping[str, int]
    plurality: str | None
    minority_alternatives: frozenset[str]


def rank_tallies(explanation_set: ExplanationSet) -> tuple[RankTally, ...]:
    """Per-rank vote tallies for ranks 1..n."""
    n = explanation_set.universe_size
    tallies = []
    for rank in range(1, n + 1):
        votes = Counter(
            e.features[rank - 1] for e in explanation_set.explanations if len(e) >= rank
        )
        plurality = _plurality_winner(votes, explanation_set)
        minority = frozenset(f for f in votes if f != plurality)
        tallies.append(RankTally(rank, dict(votes), plurality, minority))
    return tuple(tallies)


def _plurality_winner(votes: Counter[str], explanation_set: ExplanationSet) -> str | None:
    if not votes:
        return None
    best = max(votes.values())
    tied = [f for f, count in votes.items() if count == best]
    if len(tied) == 1:
        return tied[0]
    # No agreement: pick one feature deterministically, smallest mean rank
    # first, then lexicographic name.
    return min(tied, key=lambda f: (explanation_set.mean_rank(f), f))


@dataclass(frozen=True)
class Candidate:
    """A feature carried between stages with its ordering keys.

    ``stage_rank`` is the rank at which the feature was selected or was a
    plurality; for features that never won a rank it is the mean rank and
    may be fractional.
    """

    feature: str
    stage_rank: float
    mean_rank: float

    @property
    def sort_key(self) -> tuple[float, float, str]:
        return (self.stage_rank, self.mean_rank, self.feature)


def strict_rank_select(
    explanation_set: ExplanationSet,
    tallies: Sequence[RankTally] | None = None,
) -> tuple[tuple[Candidate, ...], frozenset[str]]:
    """Strict rank agreement: plurality head per rank, minorities blacklisted.

    Ranks are processed in ascending order. The plurality feature at a rank
    is selected at that rank unless it is blacklisted (then the rank selects
    nothing) or already selected (no-op). Every minority alternative that is
    not already selected joins the blacklist; blacklisted features are never
    rehabilitated by later pluralities.
    """
    if tallies is None:
        tallies = rank_tallies(explanation_set)
    selected: dict[str, Candidate] = {}
    blacklist: set[str] = set()
    for tally in tallies:
        winner = tally.plurality
        if winner is not None and winner not in blacklist and winner not in selected:
            selected[winner] = Candidate(winner, tally.rank, explanation_set.mean_rank(winner))
        for feature in tally.minority_alternatives:
            if feature not in selected:
                blacklist.add(feature)
    ordered = tuple(sorted(selected.values(), key=lambda c: c.sort_key))
    return ordered, frozenset(blacklist)


def loose_rank_extend(
    selected: Sequence[Candidate],
    blacklist: frozenset[str],
    explanation_set: ExplanationSet,
    tallies: Sequence[RankTally] | None = None,
) -> tuple[Candidate, ...]:
    """Loose rank agreement: restore every unselected feature for coverage.

    Each restored feature carries the first rank at which it was a plurality
    or, if it never was one, its mean rank across explainers. The full
    extension is kept; trimming happens at finalize.
    """
    if tallies is None:
        tallies = rank_tallies(explanation_set)
    already = {c.feature for c in selected}
    first_plurality: dict[str, int] = {}
    for tally in tallies:
        if tally.plurality is not None:
            first_plurality.setdefault(tally.plurality, tally.rank)
    restored = []
    for feature in explanation_set.feature_universe - already:
        mean = explanation_set.mean_rank(feature)
        stage_rank = first_plurality.get(feature, mean)
        restored.append(Candidate(feature, stage_rank, mean))
    return tuple(sorted([*selected, *restored], key=lambda c: c.sort_key))


@dataclass(frozen=True)
class SignProfile:
    """Per-explainer signs of one feature over the full rankings.

    ``majority_sign`` is defined iff one sign class holds strictly more
    than half the entries; neutral is a first-class sign class.
    """

    feature: str
    per_explainer_signs: tuple[Sign, ...]
    unanimous: bool
    majority_sign: Sign | None


def sign_profile(
    explanation_set: ExplanationSet,
    feature: str,
    neutral_eps: float = 0.0,
) -> SignProfile:
    """Signs of ``feature`` across explainers; an omitting explainer is Neutral."""
    if feature not in explanation_set.feature_universe:
        raise KeyError(f"feature {feature!r} does not occur in instance {explanation_set.instance_id!r}")
    signs = tuple(e.sign_of(feature, neutral_eps) for e in explanation_set.explanations)
    counts = Counter(signs)
    top_sign, top_count = counts.most_common(1)[0]
    majority = top_sign if top_count * 2 > len(signs) else None
    return SignProfile(feature, signs, len(counts) == 1, majority)


def strict_sign_filter(
    candidates: Sequence[Candidate],
    explanation_set: ExplanationSet,
    neutral_eps: float = 0.0,
) -> tuple[Candidate, ...]:
    """Keep candidates whose sign is unanimous across all explainers."""
    return tuple(
        c
        for c in candidates
        if sign_profile(explanation_set, c.feature, neutral_eps).unanimous
    )


def loose_sign_filter(
    candidates: Sequence[Candidate],
    explanation_set: ExplanationSet,
    neutral_eps: float = 0.0,
) -> tuple[Candidate, ...]:
    """Keep candidates with a strict-majority sign class; no majority drops."""
    return tuple(
        c
        for c in candidates
        if sign_profile(explanation_set, c.feature, neutral_eps).majority_sign is not None
    )


@dataclass(frozen=True)
class AggregatedFeature:
    """One entry of the unified explanation.

    ``consensus_rank`` is the 1-based position in the final ordered list;
    ``support`` counts the explainers whose sign matches the consensus sign.
    """

    feature: str
    consensus_rank: int
    sign: Sign
    mean_weight: float
    support: int


@dataclass(frozen=True)
class StageTrace:
    """Record of what every stage produced, the assertable provenance.

    ``loose_rank_set`` and ``loose_sign_set`` always hold the list that
    entered the next stage; when a loose mode did not fire they equal the
    preceding strict result, and ``modes_used`` is the witness for which
    fallbacks actually ran.
    """

    k_used: int
    modes_used: tuple[str, ...]
    strict_rank_set: tuple[tuple[str, float], ...]
    blacklist: tuple[str, ...]
    loose_rank_set: tuple[tuple[str, float], ...]
    strict_sign_set: tuple[str, ...]
    loose_sign_set: tuple[str, ...]


@dataclass(frozen=True)
class AggregatedExplanation:
    """The unified ordered top-k explanation with full provenance."""

    instance_id: str
    features: tuple[AggregatedFeature, ...]
    trace: StageTrace | None = None

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.feature for f in self.features)


def finalize(
    survivors: Sequence[Candidate],
    k: int,
    explanation_set: ExplanationSet,
    neutral_eps: float = 0.0,
    trace: StageTrace | None = None,
) -> AggregatedExplanation:
    """Order survivors by stage rank (ties: mean rank, then name), trim to k.

    Each kept feature gets its majority sign, the mean weight across all
    explainers (omitted = 0), and the count of explainers supporting the
    sign. The emitted consensus rank is the position in the final list.
    """
    ordered = sorted(survivors, key=lambda c: c.sort_key)[:k]
    m = len(explanation_set.explanations)
    features = []
    for position, candidate in enumerate(ordered, start=1):
        profile = sign_profile(explanation_set, candidate.feature, neutral_eps)
        sign = profile.majority_sign if profile.majority_sign is not None else Sign.NEUTRAL
        support = sum(1 for s in profile.per_explainer_signs if s == sign)
        weights = [e.weight_of(candidate.feature) or 0.0 for e in explanation_set.explanations]
        # fsum is correctly rounded, so the mean is explainer-order independent.
        mean_weight = math.fsum(weights) / m
        features.append(AggregatedFeature(candidate.feature, position, sign, mean_weight, support))
    return AggregatedExplanation(explanation_set.instance_id, tuple(features), trace)


def aggregate(
    explanation_set: ExplanationSet,
    config: AggregationConfig = DEFAULT_CONFIG,
    k: int | None = None,
) -> AggregatedExplanation:
    """Run the full staged pipeline on a validated explanation set.

    ``k`` overrides the adaptive threshold when given (still clamped to n).
    A loose mode fires iff the preceding strict stage yields fewer than k
    features; the trace records which modes fired. Sets with error-level
    validation findings are rejected.
    """
    findings = validate(explanation_set)
    if has_errors(findings):
        raise ValidationError([f for f in findings if f.severity == "error"])

    n = explanation_set.universe_size
    if k is None:
        k_used = threshold_k(n, config)
    else:
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise ValueError(f"k must be a positive integer, got {k!r}")
        k_used = min(k, n)
    eps = config.neutral_eps

    tallies = rank_tallies(explanation_set)
    selected, blacklist = strict_rank_select(explanation_set, tallies)

    modes: list[str] = []
    candidates = selected
    if len(selected) < k_used:
        candidates = loose_rank_extend(selected, blacklist, explanation_set, tallies)
        modes.append(LOOSE_RANK)

    strict_survivors = strict_sign_filter(candidates, explanation_set, eps)
    survivors = strict_survivors
    if len(strict_survivors) < k_used:
        survivors = loose_sign_filter(candidates, explanation_set, eps)
        modes.append(LOOSE_SIGN)

    trace = StageTrace(
        k_used=k_used,
        modes_used=tuple(modes),
        strict_rank_set=tuple((c.feature, c.stage_rank) for c in selected),
        blacklist=tuple(sorted(blacklist)),
        loose_rank_set=tuple((c.feature, c.stage_rank) for c in candidates),
        strict_sign_set=tuple(c.feature for c in strict_survivors),
        loose_sign_set=tuple(c.feature for c in survivors),
    )
    return finalize(survivors, k_used, explanation_set, eps, trace)
