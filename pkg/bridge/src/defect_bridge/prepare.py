"""Dataset preparation: labels, transforms, redundancy filter, oversampling.

The input is a prepared per-file metric table with a binary Clean/Defect
label. Preparation log-transforms configured skewed columns, drops one of
every highly rank-correlated column pair (a deliberately simple stand-in
for a full correlated-metric analysis), splits train/test with
stratification, and oversamples the minority class in the training split
by nearest-neighbor interpolation until the classes balance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd
from sklearn.model_selection import train_test_split
from sklearn.neighbors import NearestNeighbors


class DatasetError(ValueError):
    """The metric table cannot be prepared as configured."""


@dataclass(frozen=True)
class PrepareConfig:
    label_column: str = "label"
    positive_label: str = "Defect"
    test_fraction: float = 0.25
    log_transform_columns: tuple[str, ...] = ()
    correlation_threshold: float = 0.9
    seed: int = 0


@dataclass(frozen=True)
class PreparedData:
    train_features: pd.DataFrame
    train_labels: np.ndarray
    test_features: pd.DataFrame
    test_labels: np.ndarray
    feature_names: tuple[str, ...]
    dropped_correlated: tuple[str, ...]
    positive_label: str
    negative_label: str


def _signed_log1p(values: pd.Series) -> pd.Series:
    return np.sign(values) * np.log1p(np.abs(values))


def _drop_correlated(features: pd.DataFrame, threshold: float) -> tuple[pd.DataFrame, tuple[str, ...]]:
    if len(features.columns) < 2:
        return features, ()
    rho = features.corr(method="spearman").abs()
    dropped: list[str] = []
    kept: list[str] = []
    for column in features.columns:
        if any(rho.loc[column, k] > threshold for k in kept):
            dropped.append(column)
        else:
            kept.append(column)
    return features[kept], tuple(dropped)


def _oversample_minority(
    features: np.ndarray, labels: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """SMOTE-style balancing: synthesize minority rows by interpolating
    between a minority sample and one of its minority nearest neighbors."""
    values, counts = np.unique(labels, return_counts=True)
    minority = values[np.argmin(counts)]
    deficit = int(counts.max() - counts.min())
    if deficit == 0:
        return features, labels
    minority_rows = features[labels == minority]
    if len(minority_rows) == 1:
        synthetic = np.repeat(minority_rows, deficit, axis=0)
    else:
        k = min(5, len(minority_rows) - 1)
        neighbors = NearestNeighbors(n_neighbors=k + 1).fit(minority_rows)
        _, indices = neighbors.kneighbors(minority_rows)
        base = rng.integers(0, len(minority_rows), deficit)
        picked = indices[base, rng.integers(1, k + 1, deficit)]
        t = rng.random((deficit, 1))
        synthetic = minority_rows[base] + t * (minority_rows[picked] - minority_rows[base])
    balanced = np.vstack([features, synthetic])
    balanced_labels = np.concatenate([labels, np.full(deficit, minority, dtype=labels.dtype)])
    order = rng.permutation(len(balanced))
    return balanced[order], balanced_labels[order]


def prepare(table: pd.DataFrame, config: PrepareConfig = PrepareConfig()) -> PreparedData:
    if config.label_column not in table.columns:
        raise DatasetError(f"label column {config.label_column!r} not in table")
    labels_raw = table[config.label_column]
    classes = sorted(labels_raw.dropna().unique(), key=str)
    if len(classes) != 2:
        raise DatasetError(f"label must be binary, found classes {classes!r}")
    if labels_raw.isna().any():
        raise DatasetError("label column has missing values")

    if config.positive_label in (str(c) for c in classes):
        positive = next(c for c in classes if str(c) == config.positive_label)
    else:
        positive = classes[-1]
    negative = next(c for c in classes if c != positive)
    y = (labels_raw == positive).to_numpy(dtype=int)
    if y.sum() == 0 or y.sum() == len(y):
        raise DatasetError("one of the label classes is empty")

    features = table.drop(columns=[config.label_column]).select_dtypes("number").copy()
    if features.empty:
        raise DatasetError("no numeric feature columns")
    features = features.fillna(features.median(numeric_only=True))

    for column in config.log_transform_columns:
        if column not in features.columns:
            raise DatasetError(f"log-transform column {column!r} not in table")
        features[column] = _signed_log1p(features[column])

    features, dropped = _drop_correlated(features, config.correlation_threshold)

    x_train, x_test, y_train, y_test = train_test_split(
        features,
        y,
        test_size=config.test_fraction,
        random_state=config.seed,
        stratify=y,
    )
    if y_train.sum() == 0 or y_test.sum() == 0:
        raise DatasetError("a split lost the positive class; provide more data")

    rng = np.random.default_rng(config.seed)
    balanced, balanced_labels = _oversample_minority(x_train.to_numpy(float), y_train, rng)
    train_frame = pd.DataFrame(balanced, columns=features.columns)

    return PreparedData(
        train_features=train_frame,
        train_labels=balanced_labels,
        test_features=x_test.reset_index(drop=True),
        test_labels=y_test,
        feature_names=tuple(features.columns),
        dropped_correlated=dropped,
        positive_label=str(positive),
        negative_label=str(negative),
    )
