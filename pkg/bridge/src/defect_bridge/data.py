"""Deterministic toy metric table for demos and tests.

Eight per-file software metrics with heavy-tailed distributions, one
near-duplicate column (to exercise the redundancy filter), and a planted
risk signal that labels roughly a third of the files as Defect.

Run as a module to write the table:
    python -m defect_bridge.data --out toy_metrics.csv [--rows 400] [--seed 5]
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np
import pandas as pd

METRIC_COLUMNS = (
    "CountLine",
    "CountLineCode",
    "CountDeclMethod",
    "CountPath_Max",
    "Added_lines",
    "Del_lines",
    "OWN_LINE",
    "MINOR_COMMIT",
    "CountLineBlank",
)


def make_toy_dataset(rows: int = 400, seed: int = 5) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    count_line = rng.lognormal(5.0, 1.0, rows)
    table = pd.DataFrame(
        {
            "CountLine": count_line,
            # near-duplicate of CountLine; the correlation filter should drop it
            "CountLineCode": count_line * rng.uniform(0.9, 0.95, rows),
            "CountDeclMethod": rng.lognormal(2.0, 0.8, rows),
            "CountPath_Max": rng.lognormal(3.0, 1.2, rows),
            "Added_lines": rng.lognormal(3.5, 1.3, rows),
            "Del_lines": rng.lognormal(2.5, 1.2, rows),
            "OWN_LINE": rng.uniform(0.1, 1.0, rows),
            "MINOR_COMMIT": rng.poisson(2.0, rows).astype(float),
            "CountLineBlank": rng.lognormal(3.0, 0.9, rows),
        }
    )
    risk = (
        0.9 * np.log1p(table["Added_lines"])
        + 0.7 * np.log1p(table["CountLine"])
        + 0.5 * np.log1p(table["CountPath_Max"])
        - 2.2 * table["OWN_LINE"]
        + 0.4 * table["MINOR_COMMIT"]
        + rng.normal(0.0, 1.0, rows)
    )
    threshold = np.quantile(risk, 0.7)
    table["label"] = np.where(risk > threshold, "Defect", "Clean")
    return table


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--rows", type=int, default=400)
    parser.add_argument("--seed", type=int, default=5)
    args = parser.parse_args()
    table = make_toy_dataset(args.rows, args.seed)
    table.to_csv(args.out, index=False)
    print(f"wrote {args.out} ({len(table)} rows, {table['label'].eq('Defect').mean():.0%} defective)")


if __name__ == "__main__":
    main()
