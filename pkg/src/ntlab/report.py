"""Experiment configuration, verification rows and deterministic JSON/CSV output."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from . import __version__
from .lseries import UNDER_COVERAGE

TOOL = "ntlab"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    D: int | None = None
    x: float | None = None
    y: float | None = None
    alpha: float | None = None
    delta: float | None = None
    T: float | None = None
    c: float | None = None
    c1: float | None = None
    k: int | None = None
    seed: int = 0
    g: str | None = None
    out: str | None = None
    fmt: str = "json"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def get(self, name: str, default=None):
        v = getattr(self, name, None) if name in _FIELDS else self.extra.get(name)
        return default if v is None else v

    def echo(self) -> dict:
        d = {f: getattr(self, f) for f in _FIELDS if f not in ("extra", "out")}
        d.update(self.extra)
        return d


_FIELDS = {f.name for f in dataclasses.fields(ExperimentConfig)}


@dataclass(frozen=True)
class VerificationRow:
    lemma: str
    params: dict
    lhs: float
    rhs: float
    ratio: float | None
    status: str
    calibration: float | None = None

    @classmethod
    def build(cls, lemma: str, params: dict, lhs: float, rhs: float, status: str = "ratio", calibration=None):
        ratio = float(lhs) / float(rhs) if rhs != 0 else None
        return cls(lemma, params, float(lhs), float(rhs), ratio, status, calibration)

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "status": self.status,
            "calibration": self.calibration,
        }


def to_jsonable(obj: Any) -> Any:
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    return obj


def envelope(config: ExperimentConfig, result: Any, calibration: dict | None = None) -> dict:
    """Wrap a result with version, config echo, calibration constants and the grid disclaimer."""
    return {
        "tool": TOOL,
        "version": __version__,
        "experiment": config.experiment,
        "config": config.echo(),
        "calibration": calibration or {},
        "disclaimer": UNDER_COVERAGE,
        "result": result,
    }


def dumps_json(report: Any) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(v: Any) -> str:
    v = to_jsonable(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if v is None:
        return ""
    return str(v)


def rows_to_csv(rows: Iterable[dict]) -> str:
    rows = [to_jsonable(r) for r in rows]
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    cols.sort()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def flatten(obj: Any, prefix: str = "") -> list[dict]:
    """Key/value rows for reports that are not tables."""
    obj = to_jsonable(obj)
    out = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            out += flatten(obj[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list) and obj and all(isinstance(v, dict) for v in obj):
        for i, v in enumerate(obj):
            out += flatten(v, f"{prefix}[{i}]")
    else:
        out.append({"key": prefix, "value": obj})
    return out


def render(report: dict, fmt: str, table_key: str | None = None) -> str:
    if fmt == "json":
        return dumps_json(report)
    if table_key is not None:
        return rows_to_csv(report["result"][table_key])
    return rows_to_csv(flatten(report))


def write_report(report: dict, config: ExperimentConfig, table_key: str | None = None) -> str:
    text = render(report, config.fmt, table_key)
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8", newline="")
    return text
