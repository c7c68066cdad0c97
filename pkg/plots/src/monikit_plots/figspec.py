"""Figure requests and strict readers for the simulator's table schema."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

KINDS = ("arc", "collapse", "crossing", "tee", "purify", "phase_map")

#: observable column value each figure kind consumes
KIND_OBSERVABLE = {
    "arc": "arc",
    "collapse": "arc",
    "crossing": "tmi",
    "tee": "tee",
    "purify": "purify",
    "phase_map": "half_entropy",
}

CSV_COLUMNS = ("L", "p", "px", "py", "pz", "observable", "index",
               "mean", "stderr", "n_samples")


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: input tables, optional fit overlay, output path."""

    kind: str
    csv_paths: tuple[str, ...]
    out_path: str
    fit_path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind '{self.kind}'; "
                             f"choose from {KINDS}")
        paths = tuple(self.csv_paths)
        if not paths:
            raise ValueError("at least one input CSV is required")
        object.__setattr__(self, "csv_paths", paths)
        for path in paths:
            if not os.path.isfile(path):
                raise FileNotFoundError(f"input table not found: {path}")
        if self.fit_path is not None and not os.path.isfile(self.fit_path):
            raise FileNotFoundError(f"fit summary not found: {self.fit_path}")
        ext = os.path.splitext(self.out_path)[1].lower()
        if ext not in (".png", ".svg", ".pdf"):
            raise ValueError("output must end in .png, .svg, or .pdf")


def read_table(path: str) -> dict[str, np.ndarray]:
    """Read one simulator CSV, enforcing the exact column schema."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise ValueError(f"{path}: empty table") from None
        if header != CSV_COLUMNS:
            missing = set(CSV_COLUMNS) - set(header)
            extra = set(header) - set(CSV_COLUMNS)
            detail = []
            if missing:
                detail.append(f"missing columns {sorted(missing)}")
            if extra:
                detail.append(f"unexpected columns {sorted(extra)}")
            raise ValueError(f"{path}: bad header ({'; '.join(detail) or 'column order'})")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    for ln, row in enumerate(rows, start=2):
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"{path}: line {ln} has {len(row)} fields, "
                             f"expected {len(CSV_COLUMNS)}")
    cols = list(zip(*rows))
    out: dict[str, np.ndarray] = {}
    for name, values in zip(CSV_COLUMNS, cols):
        if name == "observable":
            out[name] = np.array(values)
        elif name in ("L", "n_samples"):
            out[name] = np.array([int(v) for v in values])
        elif name == "index":
            out[name] = np.array([float(v) for v in values])
        else:
            out[name] = np.array([float(v) for v in values])
    return out


def load_tables(spec: FigureSpec) -> dict[str, np.ndarray]:
    """Read and concatenate the spec's tables, checking the observable."""
    want = KIND_OBSERVABLE[spec.kind]
    parts = []
    for path in spec.csv_paths:
        table = read_table(path)
        seen = set(table["observable"].tolist())
        if seen != {want}:
            raise ValueError(
                f"{path}: figure kind '{spec.kind}' needs observable "
                f"'{want}', table holds {sorted(seen)}")
        parts.append(table)
    return {k: np.concatenate([t[k] for t in parts]) for k in CSV_COLUMNS}


def load_fit(spec: FigureSpec) -> dict | None:
    """Read the optional fit summary."""
    if spec.fit_path is None:
        return None
    with open(spec.fit_path) as fh:
        fit = json.load(fh)
    if not isinstance(fit, dict) or "kind" not in fit:
        raise ValueError(f"{spec.fit_path}: not a fit summary (no 'kind')")
    return fit
