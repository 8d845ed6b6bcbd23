"""Interchange documents: parsing, canonical serialization, CSV import.

The document family "xmentor/1" is JSON. One document carries one
predicted instance (its explanations, or its aggregation result); corpora
are arrays of documents. Writers emit canonical bytes: sorted keys, two-
space indentation, shortest lossless float text, one trailing newline, so
identical values always serialize to identical bytes.

Unknown fields survive a parse/write round-trip: every level keeps them in
an ``extra`` mapping that the writer merges back.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .aggregate import AggregatedExplanation, AggregatedFeature, StageTrace
from .metrics import DisagreementReport
from .model import (
    Explanation,
    ExplanationSet,
    FeatureAttribution,
    Finding,
    Sign,
    has_errors,
    validate,
)

SCHEMA_VERSION = "xmentor/1"


class DocumentError(ValueError):
    """Base class for interchange failures."""


class DocumentSyntaxError(DocumentError):
    """The input is not well-formed JSON."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        super().__init__(message if offset is None else f"{message} (offset {offset})")


class SchemaError(DocumentError):
    """The input is JSON but violates the document schema."""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


class DocumentValidationError(DocumentError):
    """The document parsed but its explanation set breaks an invariant."""

    def __init__(self, findings: Sequence[Finding]):
        self.findings = tuple(findings)
        detail = "; ".join(f"{f.code}: {f.message}" for f in findings)
        super().__init__(f"document failed validation: {detail}")


class DuplicateRecordError(DocumentError):
    """A CSV import carries the same (instance, explainer, feature) twice."""


def _loads(data: bytes | str) -> Any:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        # Bare NaN/Infinity tokens become floats here and are rejected by
        # the schema walk with a precise field path.
        return json.loads(text, parse_constant=float)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"not valid JSON: {exc.msg}", exc.pos) from None


def canonical_bytes(payload: Any) -> bytes:
    return (
        json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    ).encode("utf-8")


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"expected an object, got {type(value).__name__}", path)
    return value


def _expect_string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"expected a string, got {type(value).__name__}", path)
    return value


def _expect_finite_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {type(value).__name__}", path)
    if not math.isfinite(value):
        raise SchemaError("weight must be finite", path)
    return float(value)


def _expect_array(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"expected an array, got {type(value).__name__}", path)
    return value


def _check_schema_version(obj: dict, path: str) -> None:
    version = obj.get("schema_version")
    if version is None:
        raise SchemaError("missing schema_version", path)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}", path)


def _extras(obj: dict, known: tuple[str, ...]) -> dict:
    return {key: value for key, value in obj.items() if key not in known}


_SET_KEYS = ("schema_version", "instance_id", "prediction", "explanations")
_PREDICTION_KEYS = ("label", "score")
_EXPLANATION_KEYS = ("explainer", "attributions")
_ATTRIBUTION_KEYS = ("feature", "weight")


def _parse_set(obj: Any, path: str = "$") -> ExplanationSet:
    document = _expect_object(obj, path)
    _check_schema_version(document, path)
    instance_id = _expect_string(document.get("instance_id", ""), f"{path}.instance_id")

    label = ""
    score = None
    extra = _extras(document, _SET_KEYS)
    if "prediction" in document:
        prediction = _expect_object(document["prediction"], f"{path}.prediction")
        if "label" in prediction:
            label = _expect_string(prediction["label"], f"{path}.prediction.label")
        if "score" in prediction and prediction["score"] is not None:
            score = _expect_finite_number(prediction["score"], f"{path}.prediction.score")
        prediction_extra = _extras(prediction, _PREDICTION_KEYS)
        if prediction_extra:
            extra["prediction"] = prediction_extra

    explanations = []
    for i, item in enumerate(_expect_array(document.get("explanations", []), f"{path}.explanations")):
        epath = f"{path}.explanations[{i}]"
        eobj = _expect_object(item, epath)
        explainer = _expect_string(eobj.get("explainer", ""), f"{epath}.explainer")
        attributions = []
        for j, aitem in enumerate(_expect_array(eobj.get("attributions", []), f"{epath}.attributions")):
            apath = f"{epath}.attributions[{j}]"
            aobj = _expect_object(aitem, apath)
            feature = _expect_string(aobj.get("feature", ""), f"{apath}.feature")
            weight = _expect_finite_number(aobj.get("weight", 0.0), f"{apath}.weight")
            attributions.append(FeatureAttribution(feature, weight, _extras(aobj, _ATTRIBUTION_KEYS)))
        explanations.append(Explanation(explainer, tuple(attributions), _extras(eobj, _EXPLANATION_KEYS)))

    parsed = ExplanationSet(
        instance_id=instance_id,
        prediction_label=label,
        explanations=tuple(explanations),
        prediction_score=score,
        extra=extra,
    )
    findings = validate(parsed)
    if has_errors(findings):
        raise DocumentValidationError([f for f in findings if f.severity == "error"])
    return parsed


def parse_document(data: bytes | str) -> ExplanationSet:
    """Parse and validate a single explanation document."""
    obj = _loads(data)
    if isinstance(obj, list):
        raise SchemaError("expected a single document, found a corpus array; use parse_corpus")
    return _parse_set(obj)


def parse_corpus(data: bytes | str) -> list[ExplanationSet]:
    """Parse a corpus: a JSON array, a single document, or one document per line."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        obj = _loads(text)
    except DocumentSyntaxError:
        lines = [line for line in text.splitlines() if line.strip()]
        if len(lines) < 2:
            raise
        return [_parse_set(_loads(line), path=f"$[line {i + 1}]") for i, line in enumerate(lines)]
    if isinstance(obj, list):
        return [_parse_set(item, path=f"$[{i}]") for i, item in enumerate(obj)]
    return [_parse_set(obj)]


def set_to_payload(explanation_set: ExplanationSet) -> dict:
    prediction: dict[str, Any] = {"label": explanation_set.prediction_label}
    if explanation_set.prediction_score is not None:
        prediction["score"] = explanation_set.prediction_score
    prediction.update(explanation_set.extra.get("prediction", {}))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "instance_id": explanation_set.instance_id,
        "prediction": prediction,
        "explanations": [
            {
                "explainer": e.explainer,
                "attributions": [
                    {"feature": a.feature, "weight": a.weight, **a.extra} for a in e.attributions
                ],
                **e.extra,
            }
            for e in explanation_set.explanations
        ],
    }
    payload.update({k: v for k, v in explanation_set.extra.items() if k != "prediction"})
    return payload


def write_document(explanation_set: ExplanationSet) -> bytes:
    """Canonical bytes of one explanation document."""
    return canonical_bytes(set_to_payload(explanation_set))


def write_corpus(explanation_sets: Iterable[ExplanationSet]) -> bytes:
    return canonical_bytes([set_to_payload(s) for s in explanation_sets])


def _rank_value(rank: float) -> int | float:
    if isinstance(rank, float) and rank.is_integer():
        return int(rank)
    return rank


def aggregation_to_payload(result: AggregatedExplanation, with_trace: bool = True) -> dict:
    payload: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "instance_id": result.instance_id,
        "features": [
            {
                "feature": f.feature,
                "consensus_rank": f.consensus_rank,
                "sign": f.sign.value,
                "mean_weight": f.mean_weight,
                "support": f.support,
            }
            for f in result.features
        ],
    }
    if with_trace and result.trace is not None:
        trace = result.trace
        payload["trace"] = {
            "k_used": trace.k_used,
            "modes_used": list(trace.modes_used),
            "strict_rank_set": [
                {"feature": f, "rank": _rank_value(r)} for f, r in trace.strict_rank_set
            ],
            "blacklist": list(trace.blacklist),
            "loose_rank_set": [
                {"feature": f, "rank": _rank_value(r)} for f, r in trace.loose_rank_set
            ],
            "strict_sign_set": list(trace.strict_sign_set),
            "loose_sign_set": list(trace.loose_sign_set),
        }
    return payload


def write_aggregation(result: AggregatedExplanation, with_trace: bool = True) -> bytes:
    """Canonical bytes of one aggregation document."""
    return canonical_bytes(aggregation_to_payload(result, with_trace))


_SIGNS_BY_VALUE = {s.value: s for s in Sign}


def parse_aggregation(data: bytes | str) -> AggregatedExplanation:
    """Parse an aggregation document; the trace block is optional."""
    obj = _loads(data)
    document = _expect_object(obj, "$")
    _check_schema_version(document, "$")
    instance_id = _expect_string(document.get("instance_id", ""), "$.instance_id")
    features = []
    for i, item in enumerate(_expect_array(document.get("features", []), "$.features")):
        fpath = f"$.features[{i}]"
        fobj = _expect_object(item, fpath)
        sign_text = _expect_string(fobj.get("sign", ""), f"{fpath}.sign")
        if sign_text not in _SIGNS_BY_VALUE:
            raise SchemaError(f"unknown sign {sign_text!r}", f"{fpath}.sign")
        features.append(
            AggregatedFeature(
                feature=_expect_string(fobj.get("feature", ""), f"{fpath}.feature"),
                consensus_rank=int(_expect_finite_number(fobj.get("consensus_rank"), f"{fpath}.consensus_rank")),
                sign=_SIGNS_BY_VALUE[sign_text],
                mean_weight=_expect_finite_number(fobj.get("mean_weight"), f"{fpath}.mean_weight"),
                support=int(_expect_finite_number(fobj.get("support"), f"{fpath}.support")),
            )
        )
    trace = None
    if "trace" in document:
        tobj = _expect_object(document["trace"], "$.trace")
        trace = StageTrace(
            k_used=int(_expect_finite_number(tobj.get("k_used"), "$.trace.k_used")),
            modes_used=tuple(tobj.get("modes_used", [])),
            strict_rank_set=tuple(
                (entry["feature"], entry["rank"]) for entry in tobj.get("strict_rank_set", [])
            ),
            blacklist=tuple(tobj.get("blacklist", [])),
            loose_rank_set=tuple(
                (entry["feature"], entry["rank"]) for entry in tobj.get("loose_rank_set", [])
            ),
            strict_sign_set=tuple(tobj.get("strict_sign_set", [])),
            loose_sign_set=tuple(tobj.get("loose_sign_set", [])),
        )
    return AggregatedExplanation(instance_id, tuple(features), trace)


def report_to_payload(report: DisagreementReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "pairs": [
            {
                "instance_id": p.instance_id,
                "explainer_a": p.explainer_a,
                "explainer_b": p.explainer_b,
                "k": p.k,
                "fa": p.fa,
                "ra": p.ra,
                "sa": p.sa,
                "rank_mismatch_count": p.rank_mismatch_count,
                "sign_mismatch_count": p.sign_mismatch_count,
            }
            for p in report.pairs
        ],
        "histograms": {
            "rank_mismatch_count": {str(k): v for k, v in report.rank_histogram.items()},
            "sign_mismatch_count": {str(k): v for k, v in report.sign_histogram.items()},
        },
    }


def write_report(report: DisagreementReport) -> bytes:
    return canonical_bytes(report_to_payload(report))


@dataclass(frozen=True)
class TableLayout:
    """Column names mapping a prepared CSV table onto the document model."""

    instance_id: str = "instance_id"
    explainer: str = "explainer"
    feature: str = "feature"
    weight: str = "weight"
    prediction_label: str | None = None
    prediction_score: str | None = None


def import_table(data: bytes | str, layout: TableLayout = TableLayout()) -> list[ExplanationSet]:
    """Build explanation sets from a flat CSV of attribution rows.

    One set per instance id (sorted ascending); within an explainer,
    attributions are ordered by descending |weight| with CSV row order
    breaking ties. The result is not validation-gated: single-explainer
    sets import fine and are rejected downstream where it matters.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    required = [layout.instance_id, layout.explainer, layout.feature, layout.weight]
    for column in required:
        if column not in header:
            raise SchemaError(f"missing required column {column!r}", path="csv header")

    rows: dict[str, dict[str, list[tuple[str, float]]]] = {}
    labels: dict[str, str] = {}
    scores: dict[str, float] = {}
    seen: set[tuple[str, str, str]] = set()
    for line, row in enumerate(reader, start=2):
        instance = row[layout.instance_id]
        explainer = row[layout.explainer]
        feature = row[layout.feature]
        key = (instance, explainer, feature)
        if key in seen:
            raise DuplicateRecordError(
                f"row {line}: duplicate record for instance {instance!r}, "
                f"explainer {explainer!r}, feature {feature!r}"
            )
        seen.add(key)
        try:
            weight = float(row[layout.weight])
        except (TypeError, ValueError):
            raise SchemaError(f"row {line}: weight {row[layout.weight]!r} is not a number", "csv") from None
        if not math.isfinite(weight):
            raise SchemaError(f"row {line}: weight must be finite", "csv")
        rows.setdefault(instance, {}).setdefault(explainer, []).append((feature, weight))
        if layout.prediction_label and row.get(layout.prediction_label):
            labels.setdefault(instance, row[layout.prediction_label])
        if layout.prediction_score and row.get(layout.prediction_score):
            try:
                scores.setdefault(instance, float(row[layout.prediction_score]))
            except ValueError:
                raise SchemaError(f"row {line}: prediction score is not a number", "csv") from None

    sets = []
    for instance in sorted(rows):
        explanations = []
        for explainer, attributions in rows[instance].items():
            ordered = sorted(attributions, key=lambda fw: -abs(fw[1]))
            explanations.append(
                Explanation(explainer, tuple(FeatureAttribution(f, w) for f, w in ordered))
            )
        sets.append(
            ExplanationSet(
                instance_id=instance,
                prediction_label=labels.get(instance, ""),
                explanations=tuple(explanations),
                prediction_score=scores.get(instance),
            )
        )
    return sets
