"""Pairwise agreement metrics between explanations.

Three top-k metrics, each a count divided by k:

- feature agreement: shared features among both top-k lists.
- rank agreement: shared top-k features placed at the identical rank.
- sign agreement: shared top-k features with the identical sign.

Rank and sign agreement keep k as the denominator, which makes
``RA <= FA`` and ``SA <= FA`` structural. The integer products
``k*(FA-RA)`` and ``k*(FA-SA)`` count rank and sign mismatches among the
shared features and drive the corpus-level disagreement histograms.

All functions are pure; corpus aggregation merges per instance_id in
ascending order, so results never depend on scheduling or input order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .aggregate import AggregationConfig, DEFAULT_CONFIG, threshold_k
from .model import Explanation, ExplanationSet, top_k

METRIC_NAMES = ("fa", "ra", "sa")


@dataclass(frozen=True)
class PairMetrics:
    """Agreement values and mismatch counts for one explanation pair at k."""

    k: int
    fa: float
    ra: float
    sa: float
    rank_mismatch_count: int
    sign_mismatch_count: int


def _shared_top_k(e1: Explanation, e2: Explanation, k: int) -> set[str]:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return set(top_k(e1, k)) & set(top_k(e2, k))


def feature_agreement(e1: Explanation, e2: Explanation, k: int) -> float:
    """Fraction of the top-k features shared by both explanations."""
    return len(_shared_top_k(e1, e2, k)) / k


def rank_agreement(e1: Explanation, e2: Explanation, k: int) -> float:
    """Fraction of the top-k features shared and placed at the same rank."""
    shared = _shared_top_k(e1, e2, k)
    return sum(1 for f in shared if e1.rank_of(f) == e2.rank_of(f)) / k


def sign_agreement(e1: Explanation, e2: Explanation, k: int, neutral_eps: float = 0.0) -> float:
    """Fraction of the top-k features shared and carrying the same sign."""
    shared = _shared_top_k(e1, e2, k)
    return sum(1 for f in shared if e1.sign_of(f, neutral_eps) == e2.sign_of(f, neutral_eps)) / k


def pair_metrics(e1: Explanation, e2: Explanation, k: int, neutral_eps: float = 0.0) -> PairMetrics:
    """All three metrics plus mismatch counts, computed from exact counts."""
    shared = _shared_top_k(e1, e2, k)
    fa_count = len(shared)
    ra_count = sum(1 for f in shared if e1.rank_of(f) == e2.rank_of(f))
    sa_count = sum(1 for f in shared if e1.sign_of(f, neutral_eps) == e2.sign_of(f, neutral_eps))
    return PairMetrics(
        k=k,
        fa=fa_count / k,
        ra=ra_count / k,
        sa=sa_count / k,
        rank_mismatch_count=fa_count - ra_count,
        sign_mismatch_count=fa_count - sa_count,
    )


def disagreement_counts(
    e1: Explanation, e2: Explanation, k: int, neutral_eps: float = 0.0
) -> tuple[int, int]:
    """Counts of shared top-k features whose rank resp. sign mismatch.

    Equal to ``k*(FA-RA)`` and ``k*(FA-SA)`` rounded to the nearest
    integer; computed directly from counts, so both are exact and >= 0.
    """
    metrics = pair_metrics(e1, e2, k, neutral_eps)
    return metrics.rank_mismatch_count, metrics.sign_mismatch_count


@dataclass(frozen=True)
class PairwiseMatrix:
    """Symmetric explainer-by-explainer matrix of one agreement metric."""

    metric: str
    k: int
    explainers: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def at(self, a: str, b: str) -> float:
        try:
            return self.values[self.explainers.index(a)][self.explainers.index(b)]
        except ValueError:
            missing = a if a not in self.explainers else b
            raise KeyError(f"unknown explainer {missing!r}") from None


def pairwise_matrix(
    explanation_set: ExplanationSet,
    k: int,
    metric: str,
    neutral_eps: float = 0.0,
) -> PairwiseMatrix:
    """Matrix M with M[a][b] = metric(a, b, k) over all explainer pairs."""
    if metric not in METRIC_NAMES:
        raise ValueError(f"metric must be one of {METRIC_NAMES}, got {metric!r}")
    explainers = explanation_set.explainer_names
    if len(explainers) < 2:
        raise ValueError("a pairwise matrix needs at least 2 explanations")
    size = len(explainers)
    grid = [[0.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            pm = pair_metrics(
                explanation_set.explanations[i],
                explanation_set.explanations[j],
                k,
                neutral_eps,
            )
            grid[i][j] = grid[j][i] = getattr(pm, metric)
    return PairwiseMatrix(metric, k, explainers, tuple(tuple(row) for row in grid))


@dataclass(frozen=True)
class PairRecord:
    """Metrics of one explainer pair on one instance."""

    instance_id: str
    explainer_a: str
    explainer_b: str
    k: int
    fa: float
    ra: float
    sa: float
    rank_mismatch_count: int
    sign_mismatch_count: int


@dataclass(frozen=True)
class DisagreementReport:
    """Per-pair metric rows plus corpus-wide mismatch-count histograms.

    Histogram mass totals the number of (instance, pair) combinations.
    """

    pairs: tuple[PairRecord, ...]
    rank_histogram: Mapping[int, int]
    sign_histogram: Mapping[int, int]

    def mean_rank_mismatch(self) -> float | None:
        if not self.pairs:
            return None
        return sum(p.rank_mismatch_count for p in self.pairs) / len(self.pairs)

    def mean_sign_mismatch(self) -> float | None:
        if not self.pairs:
            return None
        return sum(p.sign_mismatch_count for p in self.pairs) / len(self.pairs)


def instance_records(
    explanation_set: ExplanationSet,
    k: int | None = None,
    config: AggregationConfig = DEFAULT_CONFIG,
) -> tuple[PairRecord, ...]:
    """Pair records for one instance; k defaults to the adaptive threshold.

    Pairs are normalized to explainer_a < explainer_b (the metrics are
    symmetric), keeping output independent of document order.
    """
    k_used = k if k is not None else threshold_k(explanation_set.universe_size, config)
    records = []
    explanations = sorted(explanation_set.explanations, key=lambda e: e.explainer)
    for i, e1 in enumerate(explanations):
        for e2 in explanations[i + 1 :]:
            pm = pair_metrics(e1, e2, k_used, config.neutral_eps)
            records.append(
                PairRecord(
                    instance_id=explanation_set.instance_id,
                    explainer_a=e1.explainer,
                    explainer_b=e2.explainer,
                    k=pm.k,
                    fa=pm.fa,
                    ra=pm.ra,
                    sa=pm.sa,
                    rank_mismatch_count=pm.rank_mismatch_count,
                    sign_mismatch_count=pm.sign_mismatch_count,
                )
            )
    return tuple(records)


def corpus_histograms(
    explanation_sets: Iterable[ExplanationSet],
    k: int | None = None,
    config: AggregationConfig = DEFAULT_CONFIG,
) -> DisagreementReport:
    """Disagreement report over a corpus; an empty corpus yields empty tables."""
    all_records: list[PairRecord] = []
    for explanation_set in sorted(explanation_sets, key=lambda s: s.instance_id):
        all_records.extend(instance_records(explanation_set, k, config))
    rank_hist = Counter(r.rank_mismatch_count for r in all_records)
    sign_hist = Counter(r.sign_mismatch_count for r in all_records)
    return DisagreementReport(
        pairs=tuple(all_records),
        rank_histogram=dict(sorted(rank_hist.items())),
        sign_histogram=dict(sorted(sign_hist.items())),
    )
