"""Shared builders for fixtures and seeded random explanation sets."""

from __future__ import annotations

import numpy as np

from xmentor.model import Explanation, ExplanationSet, FeatureAttribution


def build_explanation(name: str, rows: list[tuple[str, float]]) -> Explanation:
    return Explanation(name, tuple(FeatureAttribution(f, w) for f, w in rows))


def golden_trio_set() -> ExplanationSet:
    """Three explainers over seven features; the documented end-to-end case.

    Weights are synthetic but reproduce the canonical rank and sign
    pattern: F1 unanimous positive at rank 1, F4 with a three-way sign
    split, F6/F7 neutral tails, and the rank swaps that force both loose
    fallbacks to fire at k=5.
    """
    return ExplanationSet(
        instance_id="golden-1",
        prediction_label="Defect",
        prediction_score=0.83,
        explanations=(
            build_explanation(
                "LIME",
                [("F1", 0.91), ("F2", -0.82), ("F3", 0.73), ("F5", -0.64), ("F4", 0.55), ("F6", 0.0), ("F7", 0.0)],
            ),
            build_explanation(
                "SHAP",
                [("F1", 0.88), ("F3", -0.77), ("F2", 0.66), ("F6", 0.55), ("F5", -0.44), ("F7", 0.0), ("F4", 0.0)],
            ),
            build_explanation(
                "BreakDown",
                [("F1", 0.95), ("F3", 0.85), ("F2", -0.75), ("F5", -0.65), ("F4", -0.55), ("F6", 0.0), ("F7", 0.0)],
            ),
        ),
    )


def lime_shap_pair_set() -> ExplanationSet:
    """LIME/SHAP pair over five churn metrics with published weights."""
    return ExplanationSet(
        instance_id="pair-1",
        prediction_label="Defect",
        prediction_score=0.76,
        explanations=(
            build_explanation(
                "LIME",
                [
                    ("CountLine", 0.24),
                    ("CountPath_Max", 0.09),
                    ("CountPath_Mean", 0.07),
                    ("Added_lines", 0.06),
                    ("Del_lines", 0.06),
                ],
            ),
            build_explanation(
                "SHAP",
                [
                    ("CountLine", 0.22),
                    ("Del_lines", 0.14),
                    ("CountPath_Max", 0.08),
                    ("CountPath_Mean", -0.03),
                    ("Added_lines", 0.01),
                ],
            ),
        ),
    )


_MAGNITUDE_GRID = [round(0.05 * i, 2) for i in range(21)]  # 0.0 .. 1.0, ties likely


def make_random_set(
    rng: np.random.Generator,
    instance_id: str,
    n_range: tuple[int, int] = (1, 6),
    m_range: tuple[int, int] = (2, 4),
    omit_prob: float = 0.25,
) -> ExplanationSet:
    """Adversarial random set: grid weights (many ties and zeros), ragged
    per-explainer feature subsets, occasional empty explanations."""
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    pool = [f"f{j}" for j in range(1, n + 1)]

    explanations = []
    for i in range(m):
        kept = [f for f in pool if rng.random() >= omit_prob]
        magnitudes = [float(rng.choice(_MAGNITUDE_GRID)) for _ in kept]
        signs = [1.0 if rng.random() < 0.5 else -1.0 for _ in kept]
        rows = sorted(
            zip(kept, (s * m_ for s, m_ in zip(signs, magnitudes))),
            key=lambda fw: -abs(fw[1]),
        )
        explanations.append(build_explanation(f"explainer-{i + 1}", rows))

    if not any(e.attributions for e in explanations):
        explanations[0] = build_explanation("explainer-1", [(pool[0], 0.5)])
    return ExplanationSet(
        instance_id=instance_id,
        prediction_label="Defect",
        explanations=tuple(explanations),
    )
