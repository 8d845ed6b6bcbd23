"""Seeded synthetic explanation-set corpora for tests and experiments.

The generator is deterministic: identical :class:`GeneratorSpec` values
produce identical corpora. Randomness comes from numpy's PCG64 stream (a
named, seedable, portable generator), seeded directly from ``spec.seed``.

Three perturbation regimes control how explainers disagree:

- independent_random: every explainer draws weights independently.
- rank_jitter_sign_preserving: explainers reorder features by bounded
  adjacent swaps but keep every feature's sign, so sign agreement always
  equals feature agreement.
- sign_flip_rank_preserving: explainers keep the exact base ordering but
  flip a random subset of signs, so rank agreement always equals feature
  agreement.

No claim of statistical realism; the regimes exist to pin structural laws.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import Explanation, ExplanationSet, FeatureAttribution

_ZERO_WEIGHT_PROB = 0.15
_SIGN_FLIP_PROB = 0.3


class Perturbation(enum.Enum):
    INDEPENDENT_RANDOM = "independent_random"
    RANK_JITTER_SIGN_PRESERVING = "rank_jitter_sign_preserving"
    SIGN_FLIP_RANK_PRESERVING = "sign_flip_rank_preserving"


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one reproducible corpus.

    ``n_features`` is an inclusive (low, high) range sampled per instance.
    ``truncate_prob`` is the chance that an explainer reports only a prefix
    of its ranking, which exercises the missing-feature convention while
    preserving both regime laws (prefix ranks and signs are unchanged).
    """

    seed: int
    n_features: tuple[int, int] = (3, 8)
    n_explainers: int = 3
    perturbation: Perturbation = Perturbation.INDEPENDENT_RANDOM
    weight_scale: float = 1.0
    truncate_prob: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or self.seed < 0 or self.seed >= 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        low, high = self.n_features
        if not (isinstance(low, int) and isinstance(high, int) and 1 <= low <= high):
            raise ValueError(f"n_features must be an inclusive positive range, got {self.n_features!r}")
        if self.n_explainers < 2:
            raise ValueError("n_explainers must be at least 2")
        if not self.weight_scale > 0:
            raise ValueError("weight_scale must be positive")
        if not 0.0 <= self.truncate_prob <= 1.0:
            raise ValueError("truncate_prob must lie in [0, 1]")


def _draw_magnitudes(rng: np.random.Generator, n: int, scale: float) -> list[float]:
    # Rounding to 3 decimals produces occasional exact ties, deliberately.
    raw = np.round(rng.uniform(0.05, 1.0, n), 3)
    zero = rng.random(n) < _ZERO_WEIGHT_PROB
    raw[zero] = 0.0
    return [float(m) * scale for m in raw]


def _ordered_explanation(
    explainer: str, features: list[str], weights: dict[str, float]
) -> Explanation:
    ordered = sorted(features, key=lambda f: -abs(weights[f]))
    return Explanation(
        explainer,
        tuple(FeatureAttribution(f, weights[f]) for f in ordered),
    )


def _maybe_truncate(
    rng: np.random.Generator, explanation: Explanation, truncate_prob: float
) -> Explanation:
    if truncate_prob <= 0.0 or not rng.random() < truncate_prob:
        return explanation
    keep = int(rng.integers(1, len(explanation.attributions) + 1))
    return Explanation(explanation.explainer, explanation.attributions[:keep])


def generate(spec: GeneratorSpec, count: int) -> list[ExplanationSet]:
    """Produce ``count`` explanation sets for the given spec."""
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    explainers = [f"explainer-{i + 1}" for i in range(spec.n_explainers)]
    low, high = spec.n_features

    sets = []
    for index in range(count):
        n = int(rng.integers(low, high + 1))
        features = [f"f{j + 1:02d}" for j in range(n)]

        base_magnitudes = _draw_magnitudes(rng, n, spec.weight_scale)
        base_signs = [1.0 if rng.random() < 0.5 else -1.0 for _ in range(n)]
        base_weights = {
            f: s * m for f, s, m in zip(features, base_signs, base_magnitudes)
        }
        base_order = sorted(features, key=lambda f: -abs(base_weights[f]))

        explanations = []
        for e_index, explainer in enumerate(explainers):
            if spec.perturbation is Perturbation.INDEPENDENT_RANDOM:
                magnitudes = _draw_magnitudes(rng, n, spec.weight_scale)
                signs = [1.0 if rng.random() < 0.5 else -1.0 for _ in range(n)]
                weights = {f: s * m for f, s, m in zip(features, signs, magnitudes)}
                explanation = _ordered_explanation(explainer, features, weights)
            elif e_index == 0:
                explanation = _ordered_explanation(explainer, features, dict(base_weights))
            elif spec.perturbation is Perturbation.RANK_JITTER_SIGN_PRESERVING:
                explanation = _jittered(rng, explainer, base_order, base_weights, spec.weight_scale)
            else:
                explanation = _sign_flipped(rng, explainer, base_order, base_weights)
            explanations.append(_maybe_truncate(rng, explanation, spec.truncate_prob))

        sets.append(
            ExplanationSet(
                instance_id=f"synth-{index:05d}",
                prediction_label="Defect",
                explanations=tuple(explanations),
                prediction_score=round(float(rng.uniform(0.5, 1.0)), 4),
            )
        )
    return sets


def _jittered(
    rng: np.random.Generator,
    explainer: str,
    base_order: list[str],
    base_weights: dict[str, float],
    scale: float,
) -> Explanation:
    """Reorder the non-zero prefix by adjacent swaps; keep every sign.

    Zero-weight features stay a zero-weight tail so the jittered list is
    still ordered by non-increasing |weight|.
    """
    prefix = [f for f in base_order if base_weights[f] != 0.0]
    tail = [f for f in base_order if base_weights[f] == 0.0]
    order = list(prefix)
    for _ in range(int(rng.integers(0, len(order) + 1))):
        if len(order) < 2:
            break
        i = int(rng.integers(0, len(order) - 1))
        order[i], order[i + 1] = order[i + 1], order[i]

    magnitudes = sorted(
        (float(m) * scale for m in np.round(rng.uniform(0.05, 1.0, len(order)), 3)),
        reverse=True,
    )
    weights = {
        f: (1.0 if base_weights[f] > 0 else -1.0) * m for f, m in zip(order, magnitudes)
    }
    weights.update({f: 0.0 for f in tail})
    attributions = [FeatureAttribution(f, weights[f]) for f in order + tail]
    return Explanation(explainer, tuple(attributions))


def _sign_flipped(
    rng: np.random.Generator,
    explainer: str,
    base_order: list[str],
    base_weights: dict[str, float],
) -> Explanation:
    """Keep the base order and magnitudes; flip a random subset of signs."""
    attributions = []
    for feature in base_order:
        weight = base_weights[feature]
        if weight != 0.0 and rng.random() < _SIGN_FLIP_PROB:
            weight = -weight
        attributions.append(FeatureAttribution(feature, weight))
    return Explanation(explainer, tuple(attributions))
