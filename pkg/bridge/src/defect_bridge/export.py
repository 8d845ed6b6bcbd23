"""Train a classifier and export per-instance explainer trios.

Output documents follow the "xmentor/1" interchange schema: one JSON
document per predicted instance plus a corpus array, written with sorted
keys and a trailing newline. This serializer is the bridge's own; the
aggregation engine is a separate program consumed via these files.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier

from .explainers import EXPLAINER_IDS, explain_instance
from .prepare import PreparedData

SCHEMA_VERSION = "xmentor/1"


@dataclass(frozen=True)
class ExportConfig:
    instances: int = 20
    seed: int = 0
    background_rows: int = 150
    prefer_predicted_defects: bool = True


def _document(
    instance_id: str,
    label: str,
    score: float,
    attributions: dict[str, list[tuple[str, float]]],
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "instance_id": instance_id,
        "prediction": {"label": label, "score": round(float(score), 6)},
        "explanations": [
            {
                "explainer": explainer,
                "attributions": [
                    {"feature": feature, "weight": float(weight)} for feature, weight in rows
                ],
            }
            for explainer, rows in attributions.items()
        ],
    }


def _canonical(payload) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _ordered_rows(feature_names: tuple[str, ...], weights: np.ndarray) -> list[tuple[str, float]]:
    order = sorted(range(len(feature_names)), key=lambda i: -abs(weights[i]))
    return [(feature_names[i], float(weights[i])) for i in order]


def train_and_explain(prepared: PreparedData, config: ExportConfig = ExportConfig()) -> list[dict]:
    """Fit gradient boosting and explain selected test instances.

    Returns one document dict per instance. Instances predicted as the
    positive class are preferred (they are what a reviewer inspects);
    remaining slots fall back to the other test rows in order. A failing
    explainer skips the instance with a warning on stderr.
    """
    model = GradientBoostingClassifier(random_state=config.seed)
    model.fit(prepared.train_features.to_numpy(float), prepared.train_labels)

    test_matrix = prepared.test_features.to_numpy(float)
    scores = model.predict_proba(test_matrix)[:, 1]
    indices = list(range(len(test_matrix)))
    if config.prefer_predicted_defects:
        indices.sort(key=lambda i: (scores[i] < 0.5, i))
    selected = indices[: config.instances]

    background = prepared.train_features.to_numpy(float)[: config.background_rows]
    documents = []
    for index in selected:
        instance = test_matrix[index]
        label = prepared.positive_label if scores[index] >= 0.5 else prepared.negative_label
        attributions: dict[str, list[tuple[str, float]]] = {}
        try:
            for offset, explainer_id in enumerate(EXPLAINER_IDS):
                rng = np.random.default_rng((config.seed, index, offset))
                weights = explain_instance(explainer_id, model, background, instance, rng)
                attributions[explainer_id] = _ordered_rows(prepared.feature_names, weights)
        except Exception as exc:  # pragma: no cover - defensive skip path
            print(f"warning: instance {index} skipped: {exc}", file=sys.stderr)
            continue
        documents.append(
            _document(f"test-{index:04d}", label, scores[index], attributions)
        )
    return documents


def write_documents(documents: list[dict], out_dir: Path) -> list[Path]:
    """One .xm file per document plus a corpus.xm array, all canonical."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for document in documents:
        path = out_dir / f"{document['instance_id']}.xm"
        path.write_bytes(_canonical(document))
        paths.append(path)
    corpus = out_dir / "corpus.xm"
    corpus.write_bytes(_canonical(documents))
    paths.append(corpus)
    return paths
