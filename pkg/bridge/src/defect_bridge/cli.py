"""Bridge command line: export explainer trios from a metric table.

    xmentor-bridge export --dataset metrics.csv --out exported/ --instances 20 --seed 7

The exported directory holds one "xmentor/1" document per instance plus
corpus.xm; feed them to the aggregation engine CLI (validate, aggregate,
report).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import pandas as pd

from .export import ExportConfig, train_and_explain, write_documents
from .prepare import DatasetError, PrepareConfig, prepare


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xmentor-bridge")
    sub = parser.add_subparsers(dest="command", required=True)

    p_export = sub.add_parser("export", help="train, explain, and write xmentor/1 documents")
    p_export.add_argument("--dataset", required=True, metavar="PATH", help="CSV metric table")
    p_export.add_argument("--out", required=True, metavar="DIR")
    p_export.add_argument("--instances", type=int, default=20, metavar="N")
    p_export.add_argument("--seed", type=int, default=0, metavar="S")
    p_export.add_argument("--label-column", default="label")
    p_export.add_argument(
        "--log-columns",
        default="",
        metavar="A,B,...",
        help="comma-separated skewed columns to log-transform (default: none)",
    )
    p_export.add_argument("--correlation-threshold", type=float, default=0.9)
    return parser


def cmd_export(args: argparse.Namespace) -> int:
    try:
        table = pd.read_csv(args.dataset)
    except OSError as exc:
        print(f"xmentor-bridge: cannot read {args.dataset}: {exc}", file=sys.stderr)
        return 1
    log_columns = tuple(c for c in args.log_columns.split(",") if c)
    prepare_config = PrepareConfig(
        label_column=args.label_column,
        log_transform_columns=log_columns,
        correlation_threshold=args.correlation_threshold,
        seed=args.seed,
    )
    try:
        prepared = prepare(table, prepare_config)
        documents = train_and_explain(prepared, ExportConfig(instances=args.instances, seed=args.seed))
    except DatasetError as exc:
        print(f"xmentor-bridge: {exc}", file=sys.stderr)
        return 1
    paths = write_documents(documents, Path(args.out))
    if prepared.dropped_correlated:
        print(
            f"dropped correlated columns: {', '.join(prepared.dropped_correlated)}",
            file=sys.stderr,
        )
    print(f"exported {len(documents)} instance document(s) to {args.out}", file=sys.stderr)
    return 0 if paths else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "export":
        return cmd_export(args)
    return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
