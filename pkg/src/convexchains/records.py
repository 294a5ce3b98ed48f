"""Point-file parsing and the machine-readable output formats.

Delimited output is comma-separated with a header line; a trailing line
``#summary {...}`` carries the summary object as JSON. Reals in CSV columns
are written with 17 significant digits.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .experiments import LimitShapeResult, LimitShapeRow, RunSummary

SCHEMA_VERSION = 1
SUMMARY_PREFIX = "#summary "


class PointFileError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_points(text: str) -> np.ndarray:
    """Parse "x y" lines; '#' starts a comment line, blank lines are skipped."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PointFileError(lineno, f"expected two numbers, got {raw!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise PointFileError(lineno, f"not a number in {raw!r}") from None
        if not (np.isfinite(x) and np.isfinite(y)):
            raise PointFileError(lineno, f"non-finite coordinate in {raw!r}")
        rows.append((x, y))
    return np.array(rows, dtype=float).reshape(-1, 2)


def read_points(path) -> np.ndarray:
    return parse_points(Path(path).read_text())


def fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def chain_record(length: int, indices) -> dict:
    return {"schema": SCHEMA_VERSION, "length": int(length), "indices": [int(i) for i in indices]}


def summary_record(s: RunSummary, with_elapsed: bool = False) -> dict:
    rec = {
        "schema": SCHEMA_VERSION,
        "n": s.n,
        "replicates": s.replicates,
        "model": s.model,
        "band": s.band,
        "seed": s.master_seed,
        "meanLength": s.mean_length,
        "normalizedMean": s.normalized_mean,
        "stdDev": s.sample_std_dev,
        "median": s.empirical_median,
        "dHalf": s.d_half,
        "histogram": list(s.histogram),
        "histogramEdges": list(s.histogram_edges),
        "warnings": list(s.warnings),
    }
    if with_elapsed:
        rec["elapsedSeconds"] = s.elapsed
    return rec


def dumps(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))


def write_simulation(fh, s: RunSummary) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["replicate", "seed", "length"])
    for i, (seed, length) in enumerate(zip(s.seeds, s.lengths)):
        w.writerow([i, seed, length])
    fh.write(SUMMARY_PREFIX + dumps(summary_record(s)) + "\n")


def _split(text: str) -> tuple[list[dict], dict]:
    lines = text.splitlines()
    summary = {}
    body = []
    for line in lines:
        if line.startswith(SUMMARY_PREFIX):
            summary = json.loads(line[len(SUMMARY_PREFIX):])
        else:
            body.append(line)
    return list(csv.DictReader(body)), summary


def read_simulation(path) -> RunSummary:
    rows, rec = _split(Path(path).read_text())
    if rec.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {rec.get('schema')!r}")
    return RunSummary(
        n=rec["n"],
        replicates=rec["replicates"],
        mean_length=rec["meanLength"],
        normalized_mean=rec["normalizedMean"],
        sample_std_dev=rec["stdDev"],
        empirical_median=rec["median"],
        d_half=rec["dHalf"],
        histogram=tuple(rec["histogram"]),
        histogram_edges=tuple(float(e) for e in rec["histogramEdges"]),
        lengths=tuple(int(r["length"]) for r in rows),
        seeds=tuple(int(r["seed"]) for r in rows),
        master_seed=rec["seed"],
        model=rec["model"],
        band=rec["band"],
        warnings=tuple(rec["warnings"]),
    )


def limit_shape_record(res: LimitShapeResult) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "n": res.n,
        "replicates": len(res.rows),
        "seed": res.master_seed,
        "band": res.band,
        "quantiles": res.quantiles(),
    }


def write_limit_shape(fh, res: LimitShapeResult) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["replicate", "length", "hausdorffDistance"])
    for r in res.rows:
        w.writerow([r.replicate, r.length, fmt_real(r.distance)])
    fh.write(SUMMARY_PREFIX + dumps(limit_shape_record(res)) + "\n")


def read_limit_shape(path) -> LimitShapeResult:
    rows, rec = _split(Path(path).read_text())
    return LimitShapeResult(
        n=rec["n"],
        master_seed=rec["seed"],
        band=rec["band"],
        rows=tuple(
            LimitShapeRow(int(r["replicate"]), int(r["length"]), float(r["hausdorffDistance"])) for r in rows
        ),
    )
