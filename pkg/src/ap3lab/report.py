"""Experiment reports: ordered, timed stages with stable JSON / CSV emission.

CSV flattening: one row per leaf value, columns ``stage,field,value``.
Nested dict keys are joined with dots; lists are written as compact JSON.
Top-level fields appear as stage ``-``.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

SCHEMA_VERSION = "1.0"
TIMING_FIELDS = ("wall_time_ms",)


def to_jsonable(obj: Any) -> Any:
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
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
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def digest(obj: Any) -> str:
    blob = json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class Stage:
    name: str
    inputs_digest: str
    outputs: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs_digest": self.inputs_digest,
            "outputs": to_jsonable(self.outputs),
            "certificates": to_jsonable(self.certificates),
            "wall_time_ms": round(self.wall_time_ms, 3),
        }


@dataclass
class ExperimentReport:
    command: str
    config: dict
    stages: list[Stage] = field(default_factory=list)
    verdict: str = ""
    schema_version: str = SCHEMA_VERSION

    @contextmanager
    def stage(self, name: str, inputs: Any):
        st = Stage(name, digest(inputs))
        t0 = time.perf_counter()
        try:
            yield st
        finally:
            st.wall_time_ms = (time.perf_counter() - t0) * 1e3
            self.stages.append(st)

    def get(self, name: str) -> Stage:
        for st in self.stages:
            if st.name == name:
                return st
        raise KeyError(name)

    def to_dict(self, timing: bool = True) -> dict:
        stages = [st.to_dict() for st in self.stages]
        if not timing:
            for st in stages:
                for key in TIMING_FIELDS:
                    st.pop(key, None)
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config": to_jsonable(self.config),
            "stages": stages,
            "verdict": self.verdict,
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentReport":
        stages = [
            Stage(s["name"], s["inputs_digest"], s["outputs"], s["certificates"], s.get("wall_time_ms", 0.0))
            for s in doc["stages"]
        ]
        return cls(doc["command"], doc["config"], stages, doc["verdict"], doc["schema_version"])


def strip_timing(doc: Any) -> Any:
    """Drop timing fields anywhere in a decoded JSON document."""
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k not in TIMING_FIELDS}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


def _flatten(prefix: str, value: Any, out: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        out.append((prefix, json.dumps(value, separators=(",", ":"))))
    else:
        out.append((prefix, value))


def report_csv(report: ExperimentReport) -> str:
    doc = report.to_dict()
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["stage", "field", "value"])
    rows: list = []
    for key in ("schema_version", "command", "verdict"):
        rows.append(("-", key, doc[key]))
    flat: list = []
    _flatten("", doc["config"], flat)
    rows += [("-", f"config.{k}", v) for k, v in flat]
    for st in doc["stages"]:
        flat = []
        _flatten("", {k: v for k, v in st.items() if k != "name"}, flat)
        rows += [(st["name"], k, v) for k, v in flat]
    wr.writerows(rows)
    return buf.getvalue()


def table_csv(rows: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=header, extrasaction="ignore", lineterminator="\n")
    wr.writeheader()
    for row in rows:
        wr.writerow(to_jsonable(row))
    return buf.getvalue()


def render(payload: Any, fmt: str = "json", header: list[str] | None = None) -> str:
    """Serialise a report, a table (list of dicts), or a plain dict."""
    if fmt == "json":
        if isinstance(payload, ExperimentReport):
            return payload.to_json()
        return json.dumps(to_jsonable(payload), indent=2) + "\n"
    if fmt == "csv":
        if isinstance(payload, ExperimentReport):
            return report_csv(payload)
        if isinstance(payload, list):
            return table_csv(payload, header or list(payload[0]) if payload else (header or []))
        flat: list = []
        _flatten("", to_jsonable(payload), flat)
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["field", "value"])
        wr.writerows(flat)
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit(payload: Any, fmt: str = "json", path=None, header: list[str] | None = None) -> str:
    text = render(payload, fmt, header)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)
    return text
