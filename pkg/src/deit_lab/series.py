"""Tabular curve output with reproducible CSV serialisation."""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ValidationError

FLOAT_FORMAT = "%.12g"


def params_hash(params: Mapping) -> str:
    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class CurveSeries:
    """Rectangular table: one parameter column followed by output columns."""

    columns: list[str]
    rows: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.columns):
            raise ValidationError(
                f"rows of shape {self.rows.shape} do not match {len(self.columns)} columns"
            )
        if not np.all(np.isfinite(self.rows)):
            raise ValidationError("curve series contains non-finite values")

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    @property
    def x(self) -> np.ndarray:
        return self.rows[:, 0]

    def to_csv_text(self, timestamp: str | None = None) -> str:
        buf = io.StringIO()
        meta = dict(self.metadata)
        params = meta.pop("parameters", {})
        for key in sorted(meta):
            buf.write(f"# {key}: {meta[key]}\n")
        buf.write(f"# parameters_hash: {params_hash(params)}\n")
        buf.write(f"# parameters: {json.dumps(params, sort_keys=True, default=str)}\n")
        stamp = timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        buf.write(f"# timestamp: {stamp}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([FLOAT_FORMAT % v for v in row])
        return buf.getvalue()

    def write_csv(self, path: str | Path, timestamp: str | None = None) -> Path:
        path = Path(path)
        path.write_text(self.to_csv_text(timestamp))
        return path


def read_csv(path: str | Path) -> CurveSeries:
    meta: dict = {}
    lines = Path(path).read_text().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition(": ")
            meta[key] = val
        else:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    rows = [[float(v) for v in r] for r in reader if r]
    if "parameters" in meta:
        meta["parameters"] = json.loads(meta["parameters"])
    return CurveSeries(header, np.array(rows).reshape(-1, len(header)), meta)
