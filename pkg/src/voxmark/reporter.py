"""
Reporter Module - voxmark
-------------------------
Atomic JSON/CSV report files and rich console summaries.
"""
import json
import math
import os
import tempfile
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from rich.panel import Panel
from rich.table import Table

from .log import console

REPORT_SCHEMA = 1


# ── Files ─────────────────────────────────────────────────────────────────────
def _atomic_write(path, write) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".voxmark-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            write(f)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def plain(value):
    """JSON-ready copy: numpy scalars and arrays become Python values,
    non-finite floats become the strings "Infinity", "-Infinity" or null."""
    if isinstance(value, Mapping):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return None
        return "Infinity" if value > 0 else "-Infinity"
    return value


def write_json_atomic(path, doc: Mapping) -> None:
    text = json.dumps(plain(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"
    _atomic_write(path, lambda f: f.write(text))


def write_csv_atomic(path, frame: pd.DataFrame, float_format: Optional[str] = None) -> None:
    _atomic_write(path, lambda f: frame.to_csv(f, index=False, float_format=float_format,
                                               lineterminator="\n"))


def write_rows_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    write_csv_atomic(path, pd.DataFrame(list(rows), columns=list(header)), float_format="%.6g")


def report_document(config: Mapping, seed: int, body: Mapping,
                    warnings: Sequence[str] = ()) -> dict:
    return {"schema": REPORT_SCHEMA, "config": dict(config), "seed": seed,
            **body, "warnings": list(warnings)}


# ── Console ───────────────────────────────────────────────────────────────────
def _fmt(value, digits=3) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def print_extraction(n_rows: int, rejections) -> None:
    style = "green" if not rejections else "yellow"
    console.print(Panel(f"[bold]{n_rows}[/] utterance(s) extracted, "
                        f"[bold]{len(rejections)}[/] rejected", title="extract", style=style))
    if rejections:
        table = Table(title="Rejected utterances")
        table.add_column("recording", style="cyan")
        table.add_column("reason", style="magenta")
        table.add_column("detail")
        for r in rejections:
            table.add_row(r.recording_id, r.reason, r.error)
        console.print(table)


def print_comparisons(records, title="Group comparisons") -> None:
    table = Table(title=title)
    for name in ("feature", "comparison", "test", "statistic", "effect", "p"):
        table.add_column(name, style="cyan" if name == "feature" else None)
    for r in records:
        table.add_row(r["feature"], r["comparison"], r["test"], _fmt(r["statistic"]),
                      _fmt(r["effect_size"]), _fmt(r["p"], 4))
    console.print(table)


def print_cv(results) -> None:
    table = Table(title="Cross-validation")
    table.add_column("model", style="cyan")
    for name in ("accuracy", "precision", "recall", "auc"):
        table.add_column(name, style="magenta" if name == "accuracy" else None)
    for r in results:
        row = [f"{_fmt(r.mean[m])} ± {_fmt(r.std[m])}" for m in ("accuracy", "precision", "recall")]
        table.add_row(r.model, *row, _fmt(None if r.roc is None else r.roc.auc))
    console.print(table)


def print_sweep(sweep, title=None) -> None:
    table = Table(title=title or f"Feature-count sweep ({sweep.model})")
    table.add_column("k", justify="right")
    table.add_column("accuracy", style="magenta")
    table.add_column("added feature", style="cyan")
    names = sweep.ranking.names
    best = sweep.best.k
    for p in sweep.points:
        marker = " *" if p.k == best else ""
        table.add_row(str(p.k), f"{p.mean_accuracy:.3f} ± {p.std_accuracy:.3f}{marker}",
                      names[p.k - 1] if p.k <= len(names) else "")
    console.print(table)


def print_transfer(transfer, title="Train gender x test gender accuracy") -> None:
    table = Table(title=title)
    table.add_column("train \\ test", style="cyan")
    for g in transfer.genders:
        table.add_column(g)
    for g, row in zip(transfer.genders, transfer.accuracy):
        table.add_row(g, *(_fmt(a) for a in row))
    console.print(table)


def print_describe(frame: pd.DataFrame, shimmer_percent: bool = False) -> None:
    table = Table(title="Features by gender")
    table.add_column("feature", style="cyan")
    genders = sorted(frame["gender"].unique())
    for g in genders:
        table.add_column(f"{g} mean (sd)")
    for feature, block in frame.groupby("feature", sort=False):
        scale = 100.0 if shimmer_percent and feature == "shimmer" else 1.0
        cells = []
        for g in genders:
            row = block[block["gender"] == g]
            if row.empty:
                cells.append("-")
                continue
            mean, sd = row["mean"].iloc[0], row["sd"].iloc[0]
            cells.append(f"{_fmt(scale * mean)} ({_fmt(None if pd.isna(sd) else scale * sd)})")
        label = f"{feature} (%)" if scale != 1.0 else feature
        table.add_row(label, *cells)
    console.print(table)


def print_predictions(rows) -> None:
    table = Table(title="Predictions")
    for name in ("recording", "gender", "P(HSA)", "label"):
        table.add_column(name, style="cyan" if name == "recording" else None)
    for r in rows:
        table.add_row(r["recording_id"], r["gender"], _fmt(r["probability"]), r["label"])
    console.print(table)


def print_written(paths: Sequence[str]) -> None:
    console.print(Panel("\n".join(paths), title="written", style="green"))
