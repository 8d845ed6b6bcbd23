"""Command-line entry point.

Subcommands: validate, metrics, aggregate, report, synth. Exit codes:
0 success, 1 unreadable input or validation failure, 2 usage errors.

Machine output is canonical "xmentor/1" JSON, byte-identical for identical
inputs; human output renders the same result values as stage-by-stage text.
The --stdin flag lets editor integrations drive the engine as a child
process without temp files.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from collections import Counter
from pathlib import Path

from .aggregate import AggregatedExplanation, AggregationConfig, aggregate, threshold_k
from .formats import (
    DocumentError,
    DocumentValidationError,
    aggregation_to_payload,
    canonical_bytes,
    parse_corpus,
    write_aggregation,
    write_corpus,
    write_report,
)
from .metrics import DisagreementReport, PairRecord, corpus_histograms, pair_metrics
from .model import ExplanationSet, Finding, ValidationError, has_errors, validate
from .synth import GeneratorSpec, Perturbation, generate

_SYNTH_MODES = {
    "independent": Perturbation.INDEPENDENT_RANDOM,
    "rank_jitter": Perturbation.RANK_JITTER_SIGN_PRESERVING,
    "sign_flip": Perturbation.SIGN_FLIP_RANK_PRESERVING,
}

_CONFIG_KEYS = ("small_max", "moderate_max", "k_small", "k_moderate", "k_large", "neutral_eps")


class CliError(Exception):
    def __init__(self, message: str, exit_code: int = 1):
        super().__init__(message)
        self.exit_code = exit_code


class _Parser(argparse.ArgumentParser):
    # argparse calls sys.exit(2) on usage errors; keep that behavior but
    # make the error text ours.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def _add_input_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", metavar="PATH", help="input document or corpus file")
    parser.add_argument("--stdin", action="store_true", help="read the input from standard input")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", metavar="PATH", help="write output here instead of stdout")
    parser.add_argument(
        "--format",
        choices=("human", "machine"),
        default="human",
        help="human-readable text or canonical machine documents (default: human)",
    )


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON file with aggregation config overrides")
    parser.add_argument(
        "--neutral-eps",
        type=float,
        metavar="EPS",
        help="treat |weight| <= EPS as a neutral sign (overrides --config)",
    )


def _read_input(args: argparse.Namespace) -> bytes:
    if args.stdin and args.input:
        raise CliError("--input and --stdin are mutually exclusive", exit_code=2)
    if args.stdin:
        return sys.stdin.buffer.read()
    if not args.input:
        raise CliError("an input is required: pass --input PATH or --stdin", exit_code=2)
    try:
        return Path(args.input).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc.strerror or exc}") from None


def _load_config(args: argparse.Namespace) -> AggregationConfig:
    overrides = {}
    if getattr(args, "config", None):
        try:
            raw = json.loads(Path(args.config).read_text("utf-8"))
        except OSError as exc:
            raise CliError(f"cannot read {args.config}: {exc.strerror or exc}") from None
        except json.JSONDecodeError as exc:
            raise CliError(f"config {args.config} is not valid JSON: {exc.msg}") from None
        if not isinstance(raw, dict):
            raise CliError(f"config {args.config} must be a JSON object")
        unknown = set(raw) - set(_CONFIG_KEYS)
        if unknown:
            raise CliError(f"unknown config keys: {', '.join(sorted(unknown))}", exit_code=2)
        overrides.update(raw)
    if getattr(args, "neutral_eps", None) is not None:
        overrides["neutral_eps"] = args.neutral_eps
    try:
        return AggregationConfig(**overrides)
    except ValueError as exc:
        raise CliError(f"invalid config: {exc}", exit_code=2) from None


def _emit(args: argparse.Namespace, data: bytes | str) -> None:
    raw = data.encode("utf-8") if isinstance(data, str) else data
    if getattr(args, "output", None):
        Path(args.output).write_bytes(raw)
    else:
        sys.stdout.buffer.write(raw)
        sys.stdout.buffer.flush()


def _format_finding(finding: Finding) -> str:
    context = [p for p in (finding.explainer, finding.feature) if p]
    suffix = f" [{', '.join(context)}]" if context else ""
    return f"{finding.severity}: {finding.code}: {finding.message}{suffix}"


def cmd_validate(args: argparse.Namespace) -> int:
    data = _read_input(args)
    try:
        sets = parse_corpus(data)
    except DocumentValidationError as exc:
        findings = list(exc.findings)
        sets = []
    except DocumentError as exc:
        print(f"invalid document: {exc}", file=sys.stderr)
        return 1
    else:
        findings = [f for s in sets for f in validate(s)]

    if args.format == "machine":
        payload = {
            "schema_version": "xmentor/1",
            "valid": not has_errors(findings),
            "findings": [
                {
                    "severity": f.severity,
                    "code": f.code,
                    "message": f.message,
                    "instance_id": f.instance_id,
                    "explainer": f.explainer,
                    "feature": f.feature,
                }
                for f in findings
            ],
        }
        _emit(args, canonical_bytes(payload))
    else:
        for finding in findings:
            print(_format_finding(finding))
        if not findings:
            print(f"ok: {len(sets)} document(s), no findings")
    return 1 if has_errors(findings) else 0


def _parse_sets(data: bytes) -> list[ExplanationSet]:
    try:
        return sorted(parse_corpus(data), key=lambda s: s.instance_id)
    except DocumentError as exc:
        raise CliError(f"invalid document: {exc}") from None


def _pair_records(
    sets: list[ExplanationSet],
    args: argparse.Namespace,
    config: AggregationConfig,
) -> DisagreementReport:
    if args.pair:
        if ":" not in args.pair:
            raise CliError("--pair expects the form A:B", exit_code=2)
        name_a, name_b = args.pair.split(":", 1)
        records = []
        for explanation_set in sets:
            try:
                e1 = explanation_set.explanation_for(name_a)
                e2 = explanation_set.explanation_for(name_b)
            except KeyError as exc:
                raise CliError(str(exc.args[0])) from None
            k = args.k if args.k else threshold_k(explanation_set.universe_size, config)
            first, second = sorted((e1, e2), key=lambda e: e.explainer)
            pm = pair_metrics(first, second, k, config.neutral_eps)
            records.append(
                PairRecord(
                    instance_id=explanation_set.instance_id,
                    explainer_a=first.explainer,
                    explainer_b=second.explainer,
                    k=pm.k,
                    fa=pm.fa,
                    ra=pm.ra,
                    sa=pm.sa,
                    rank_mismatch_count=pm.rank_mismatch_count,
                    sign_mismatch_count=pm.sign_mismatch_count,
                )
            )
        rank_hist = Counter(r.rank_mismatch_count for r in records)
        sign_hist = Counter(r.sign_mismatch_count for r in records)
        return DisagreementReport(
            tuple(records), dict(sorted(rank_hist.items())), dict(sorted(sign_hist.items()))
        )
    return corpus_histograms(sets, args.k, config)


def _render_metrics_human(report: DisagreementReport) -> str:
    lines = []
    header = f"{'instance':<16} {'pair':<28} {'k':>3} {'FA':>6} {'RA':>6} {'SA':>6} {'k(FA-RA)':>9} {'k(FA-SA)':>9}"
    lines.append(header)
    lines.append("-" * len(header))
    for p in report.pairs:
        pair = f"{p.explainer_a} vs {p.explainer_b}"
        lines.append(
            f"{p.instance_id:<16} {pair:<28} {p.k:>3} {p.fa:>6.3f} {p.ra:>6.3f} {p.sa:>6.3f}"
            f" {p.rank_mismatch_count:>9} {p.sign_mismatch_count:>9}"
        )
    if report.pairs:
        lines.append("")
        lines.append(f"rank-mismatch histogram: {report.rank_histogram}")
        lines.append(f"sign-mismatch histogram: {report.sign_histogram}")
        lines.append(
            f"mean rank mismatches {report.mean_rank_mismatch():.3f}, "
            f"mean sign mismatches {report.mean_sign_mismatch():.3f}"
        )
    else:
        lines.append("(no explainer pairs)")
    return "\n".join(lines) + "\n"


def cmd_metrics(args: argparse.Namespace) -> int:
    config = _load_config(args)
    sets = _parse_sets(_read_input(args))
    report = _pair_records(sets, args, config)
    if args.format == "machine":
        _emit(args, write_report(report))
    else:
        _emit(args, _render_metrics_human(report))
    return 0


def _render_aggregation_human(result: AggregatedExplanation, explanation_set: ExplanationSet) -> str:
    trace = result.trace
    m = len(explanation_set.explanations)
    lines = [
        f"instance {result.instance_id}: {explanation_set.universe_size} features, "
        f"{m} explainers, k={trace.k_used}"
    ]

    def fmt_ranked(entries: tuple[tuple[str, float], ...]) -> str:
        if not entries:
            return "(none)"
        return " ".join(
            f"{f}@{int(r) if float(r).is_integer() else f'{r:.2f}'}" for f, r in entries
        )

    fired_rank = "fallback fired" if "loose_rank" in trace.modes_used else "not needed"
    fired_sign = "fallback fired" if "loose_sign" in trace.modes_used else "not needed"
    blacklist = " ".join(trace.blacklist) if trace.blacklist else "(empty)"
    lines.append(f"  strict rank : {fmt_ranked(trace.strict_rank_set)}")
    lines.append(f"  blacklist   : {blacklist}")
    lines.append(f"  loose rank  : {fmt_ranked(trace.loose_rank_set)} [{fired_rank}]")
    lines.append(f"  strict sign : {' '.join(trace.strict_sign_set) or '(none)'}")
    lines.append(f"  loose sign  : {' '.join(trace.loose_sign_set) or '(none)'} [{fired_sign}]")
    if result.features:
        lines.append("  final       :")
        for f in result.features:
            lines.append(
                f"    {f.consensus_rank}. {f.feature} ({f.sign.glyph}) "
                f"mean_weight={f.mean_weight:+.4f} support={f.support}/{m}"
            )
    else:
        lines.append("  final       : (empty; no feature survived the sign stages)")
    return "\n".join(lines) + "\n"


def cmd_aggregate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    sets = _parse_sets(_read_input(args))
    try:
        results = [aggregate(s, config, k=args.k) for s in sets]
    except ValidationError as exc:
        for finding in exc.findings:
            print(_format_finding(finding), file=sys.stderr)
        return 1
    if args.format == "machine":
        if len(results) == 1:
            _emit(args, write_aggregation(results[0], with_trace=args.trace))
        else:
            _emit(
                args,
                canonical_bytes([aggregation_to_payload(r, with_trace=args.trace) for r in results]),
            )
    else:
        blocks = [
            _render_aggregation_human(result, explanation_set)
            for result, explanation_set in zip(results, sets)
        ]
        _emit(args, "\n".join(blocks))
    return 0


def _safe_filename(instance_id: str, used: set[str]) -> str:
    stem = re.sub(r"[^-._a-zA-Z0-9]", "_", instance_id) or "instance"
    name = stem
    counter = 2
    while name in used:
        name = f"{stem}-{counter}"
        counter += 1
    used.add(name)
    return name


def cmd_report(args: argparse.Namespace) -> int:
    config = _load_config(args)
    sets = _parse_sets(_read_input(args))
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)

    report = corpus_histograms(sets, args.k, config)

    metric_lines = ["instance_id,explainer_a,explainer_b,k,fa,ra,sa,rank_mismatch_count,sign_mismatch_count"]
    for p in report.pairs:
        metric_lines.append(
            f"{p.instance_id},{p.explainer_a},{p.explainer_b},{p.k},"
            f"{p.fa!r},{p.ra!r},{p.sa!r},{p.rank_mismatch_count},{p.sign_mismatch_count}"
        )
    (out_dir / "metrics.csv").write_text("\n".join(metric_lines) + "\n", "utf-8")

    by_pair: dict[tuple[str, str], list[PairRecord]] = {}
    for p in report.pairs:
        by_pair.setdefault((p.explainer_a, p.explainer_b), []).append(p)
    mean_lines = ["explainer_a,explainer_b,instances,mean_fa,mean_ra,mean_sa,mean_rank_mismatch,mean_sign_mismatch"]
    for (a, b), records in sorted(by_pair.items()):
        count = len(records)
        mean_lines.append(
            f"{a},{b},{count},"
            f"{sum(r.fa for r in records) / count!r},"
            f"{sum(r.ra for r in records) / count!r},"
            f"{sum(r.sa for r in records) / count!r},"
            f"{sum(r.rank_mismatch_count for r in records) / count!r},"
            f"{sum(r.sign_mismatch_count for r in records) / count!r}"
        )
    (out_dir / "pair_means.csv").write_text("\n".join(mean_lines) + "\n", "utf-8")

    for name, histogram in (
        ("rank_histogram.csv", report.rank_histogram),
        ("sign_histogram.csv", report.sign_histogram),
    ):
        lines = ["mismatch_count,frequency"]
        lines.extend(f"{count},{freq}" for count, freq in histogram.items())
        (out_dir / name).write_text("\n".join(lines) + "\n", "utf-8")

    aggregations_dir = out_dir / "aggregations"
    aggregations_dir.mkdir(exist_ok=True)
    used: set[str] = set()
    failures = []
    for explanation_set in sets:
        name = _safe_filename(explanation_set.instance_id, used)
        try:
            result = aggregate(explanation_set, config, k=args.k)
        except ValidationError as exc:
            failures.append((explanation_set.instance_id, exc))
            continue
        (aggregations_dir / f"{name}.xm").write_bytes(write_aggregation(result, with_trace=args.trace))

    summary = {
        "schema_version": "xmentor/1",
        "instances": len(sets),
        "pair_records": len(report.pairs),
        "mean_rank_mismatch": report.mean_rank_mismatch(),
        "mean_sign_mismatch": report.mean_sign_mismatch(),
        "k_policy": args.k if args.k else "adaptive",
        "aggregation_failures": [i for i, _ in failures],
    }
    (out_dir / "summary.json").write_bytes(canonical_bytes(summary))

    for instance_id, exc in failures:
        print(f"warning: {instance_id} not aggregated: {exc}", file=sys.stderr)
    print(f"report written to {out_dir}", file=sys.stderr)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        low, high = (int(part) for part in args.features.split(":", 1))
    except ValueError:
        raise CliError("--features expects the form MIN:MAX", exit_code=2) from None
    try:
        spec = GeneratorSpec(
            seed=args.seed,
            n_features=(low, high),
            n_explainers=args.explainers,
            perturbation=_SYNTH_MODES[args.mode],
            weight_scale=args.weight_scale,
            truncate_prob=args.truncate_prob,
        )
    except ValueError as exc:
        raise CliError(str(exc), exit_code=2) from None
    sets = generate(spec, args.count)
    _emit(args, write_corpus(sets))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xmentor", description="Aggregate and compare feature-attribution explanations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check documents against the model invariants")
    _add_input_options(p_validate)
    _add_output_options(p_validate)

    p_metrics = sub.add_parser("metrics", help="pairwise feature/rank/sign agreement")
    _add_input_options(p_metrics)
    _add_output_options(p_metrics)
    _add_config_options(p_metrics)
    p_metrics.add_argument("--k", type=int, help="top-k cutoff (default: adaptive threshold)")
    p_metrics.add_argument("--pair", metavar="A:B", help="restrict to one explainer pair")

    p_aggregate = sub.add_parser("aggregate", help="compute the unified top-k explanation")
    _add_input_options(p_aggregate)
    _add_output_options(p_aggregate)
    _add_config_options(p_aggregate)
    p_aggregate.add_argument("--k", type=int, help="override the adaptive threshold")
    p_aggregate.add_argument("--trace", action="store_true", help="include the stage trace in machine output")

    p_report = sub.add_parser("report", help="write metric tables, histograms, and aggregations to a directory")
    _add_input_options(p_report)
    _add_config_options(p_report)
    p_report.add_argument("--output", metavar="DIR", required=True, help="target directory")
    p_report.add_argument("--k", type=int, help="top-k cutoff (default: adaptive threshold)")
    p_report.add_argument("--trace", action="store_true", help="include stage traces in aggregation documents")

    p_synth = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p_synth.add_argument("--seed", type=int, required=True)
    p_synth.add_argument("--count", type=int, default=10)
    p_synth.add_argument("--features", default="3:8", metavar="MIN:MAX", help="feature-universe size range")
    p_synth.add_argument("--explainers", type=int, default=3)
    p_synth.add_argument("--mode", choices=sorted(_SYNTH_MODES), default="independent")
    p_synth.add_argument("--weight-scale", type=float, default=1.0)
    p_synth.add_argument("--truncate-prob", type=float, default=0.0)
    p_synth.add_argument("--output", metavar="PATH")

    return parser


_COMMANDS = {
    "validate": cmd_validate,
    "metrics": cmd_metrics,
    "aggregate": cmd_aggregate,
    "report": cmd_report,
    "synth": cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"xmentor: {exc}", file=sys.stderr)
        return exc.exit_code
    except (DocumentError, ValidationError) as exc:
        print(f"xmentor: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"xmentor: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
