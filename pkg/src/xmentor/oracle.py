"""Naive reference implementations used as independent test oracles.

Everything here re-derives the staged aggregation rules and the agreement
metrics from scratch with explicit tables and loops: per-rank vote dicts,
an explicit blacklist set, an explicit per-feature sign table. No logic is
shared with the production ``aggregate`` and ``metrics`` modules; only the
input/output dataclasses are reused as containers so results can be
compared field by field.

Deliberately unoptimized. Intended for small inputs (the oracle envelope
in the test suite is n <= 6 and at most 4 explainers, where equivalence
with the production path is asserted exhaustively).
"""

from __future__ import annotations

import math

from .aggregate import (
    AggregatedExplanation,
    AggregatedFeature,
    AggregationConfig,
    DEFAULT_CONFIG,
    StageTrace,
)
from .metrics import PairMetrics
from .model import Explanation, ExplanationSet, Sign


def _sign_label(weight: float, eps: float) -> Sign:
    if weight > eps:
        return Sign.POSITIVE
    if weight < -eps:
        return Sign.NEGATIVE
    return Sign.NEUTRAL


def _rank_table(explanation: Explanation) -> dict[str, int]:
    table: dict[str, int] = {}
    position = 0
    for attribution in explanation.attributions:
        position = position + 1
        if attribution.feature not in table:
            table[attribution.feature] = position
    return table


def reference_metrics(
    e1: Explanation, e2: Explanation, k: int, neutral_eps: float = 0.0
) -> PairMetrics:
    """Agreement metrics by explicit enumeration over both top-k lists."""
    top1 = []
    for attribution in e1.attributions[:k]:
        top1.append(attribution.feature)
    top2 = []
    for attribution in e2.attributions[:k]:
        top2.append(attribution.feature)

    shared = []
    for feature in top1:
        if feature in top2:
            shared.append(feature)

    ranks1 = _rank_table(e1)
    ranks2 = _rank_table(e2)
    weights1 = {a.feature: a.weight for a in e1.attributions}
    weights2 = {a.feature: a.weight for a in e2.attributions}

    fa_count = len(shared)
    ra_count = 0
    sa_count = 0
    for feature in shared:
        if ranks1[feature] == ranks2[feature]:
            ra_count = ra_count + 1
        sign1 = _sign_label(weights1[feature], neutral_eps)
        sign2 = _sign_label(weights2[feature], neutral_eps)
        if sign1 == sign2:
            sa_count = sa_count + 1

    return PairMetrics(
        k=k,
        fa=fa_count / k,
        ra=ra_count / k,
        sa=sa_count / k,
        rank_mismatch_count=fa_count - ra_count,
        sign_mismatch_count=fa_count - sa_count,
    )


def reference_aggregate(
    explanation_set: ExplanationSet,
    config: AggregationConfig = DEFAULT_CONFIG,
    k: int | None = None,
) -> AggregatedExplanation:
    """Transliteration of the staged aggregation with explicit tables."""
    explanations = list(explanation_set.explanations)
    universe: set[str] = set()
    for explanation in explanations:
        for attribution in explanation.attributions:
            universe.add(attribution.feature)
    n = len(universe)

    if k is not None:
        k_used = k if k <= n else n
    elif n <= config.small_max:
        k_used = config.k_small if config.k_small <= n else n
    elif n <= config.moderate_max:
        k_used = config.k_moderate if config.k_moderate <= n else n
    else:
        k_used = config.k_large if config.k_large <= n else n

    rank_tables = [_rank_table(e) for e in explanations]

    def mean_rank(feature: str) -> float:
        total = 0
        for table in rank_tables:
            if feature in table:
                total = total + table[feature]
            else:
                total = total + n + 1
        return total / len(rank_tables)

    # Per-rank vote tables and plurality winners.
    plurality_at: dict[int, str | None] = {}
    votes_at: dict[int, dict[str, int]] = {}
    for rank in range(1, n + 1):
        votes: dict[str, int] = {}
        for table in rank_tables:
            for feature, position in table.items():
                if position == rank:
                    votes[feature] = votes.get(feature, 0) + 1
        votes_at[rank] = votes
        if not votes:
            plurality_at[rank] = None
            continue
        best_count = max(votes.values())
        contenders = sorted(
            [f for f in votes if votes[f] == best_count],
            key=lambda f: (mean_rank(f), f),
        )
        plurality_at[rank] = contenders[0]

    # Strict rank stage.
    selected_rank: dict[str, float] = {}
    blacklist: set[str] = set()
    for rank in range(1, n + 1):
        winner = plurality_at[rank]
        if winner is not None:
            if winner not in blacklist and winner not in selected_rank:
                selected_rank[winner] = rank
        for feature in votes_at[rank]:
            if feature != winner and feature not in selected_rank:
                blacklist.add(feature)

    def order_key(feature: str) -> tuple[float, float, str]:
        return (stage_rank[feature], mean_rank(feature), feature)

    stage_rank = dict(selected_rank)
    strict_order = sorted(selected_rank, key=order_key)

    # Loose rank stage: restore everything that was not selected.
    candidates = list(strict_order)
    if len(strict_order) < k_used:
        first_plurality: dict[str, int] = {}
        for rank in range(1, n + 1):
            winner = plurality_at[rank]
            if winner is not None and winner not in first_plurality:
                first_plurality[winner] = rank
        for feature in universe:
            if feature not in selected_rank:
                if feature in first_plurality:
                    stage_rank[feature] = first_plurality[feature]
                else:
                    stage_rank[feature] = mean_rank(feature)
        candidates = sorted(universe, key=order_key)

    # Explicit sign table over full rankings; a missing feature is neutral.
    sign_table: dict[str, list[Sign]] = {}
    for feature in universe:
        signs = []
        for explanation in explanations:
            weight = None
            for attribution in explanation.attributions:
                if attribution.feature == feature:
                    weight = attribution.weight
                    break
            if weight is None:
                signs.append(Sign.NEUTRAL)
            else:
                signs.append(_sign_label(weight, config.neutral_eps))
        sign_table[feature] = signs

    def majority_of(feature: str) -> Sign | None:
        signs = sign_table[feature]
        for sign in (Sign.POSITIVE, Sign.NEGATIVE, Sign.NEUTRAL):
            if signs.count(sign) * 2 > len(signs):
                return sign
        return None

    strict_sign = [f for f in candidates if len(set(sign_table[f])) == 1]
    survivors = list(strict_sign)
    modes = []
    if len(strict_order) < k_used:
        modes.append("loose_rank")
    if len(strict_sign) < k_used:
        survivors = [f for f in candidates if majority_of(f) is not None]
        modes.append("loose_sign")

    final = sorted(survivors, key=order_key)[:k_used]
    features = []
    for index, feature in enumerate(final):
        majority = majority_of(feature)
        sign = majority if majority is not None else Sign.NEUTRAL
        support = sign_table[feature].count(sign)
        weights = []
        for explanation in explanations:
            weight = 0.0
            for attribution in explanation.attributions:
                if attribution.feature == feature:
                    weight = attribution.weight
                    break
            weights.append(weight)
        mean_weight = math.fsum(weights) / len(explanations)
        features.append(AggregatedFeature(feature, index + 1, sign, mean_weight, support))

    trace = StageTrace(
        k_used=k_used,
        modes_used=tuple(modes),
        strict_rank_set=tuple((f, selected_rank[f]) for f in strict_order),
        blacklist=tuple(sorted(blacklist)),
        loose_rank_set=tuple((f, stage_rank[f]) for f in candidates),
        strict_sign_set=tuple(strict_sign),
        loose_sign_set=tuple(survivors),
    )
    return AggregatedExplanation(explanation_set.instance_id, tuple(features), trace)
