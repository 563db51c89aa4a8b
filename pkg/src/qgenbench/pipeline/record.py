"""Benchmark records and their JSON serialization."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .config import PipelineConfig, _node_from_entry

_SENTINELS = {"NaN": float("nan"), "inf": float("inf"), "-inf": float("-inf")}


@dataclass
class StageTiming:
    module_name: str
    t_preprocess: float = 0.0
    t_postprocess: float = 0.0

    @property
    def total(self) -> float:
        return self.t_preprocess + self.t_postprocess


@dataclass
class BenchmarkRecord:
    config_echo: PipelineConfig
    git_revision: str = "unknown"
    timings: list = field(default_factory=list)
    tts: float = 0.0
    t_overhead: float = 0.0
    metrics: dict = field(default_factory=dict)
    started_at: str = ""
    repetition: int = 0
    status: str = "ok"
    error: Optional[dict] = None
    warnings: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.status != "ok"

    def to_dict(self) -> dict:
        return {
            "config_echo": self.config_echo.to_dict(),
            "git_revision": self.git_revision,
            "timings": [{"module_name": t.module_name, "t_preprocess": t.t_preprocess,
                         "t_postprocess": t.t_postprocess} for t in self.timings],
            "tts": self.tts,
            "t_overhead": self.t_overhead,
            "metrics": self.metrics,
            "started_at": self.started_at,
            "repetition": self.repetition,
            "status": self.status,
            "error": self.error,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchmarkRecord":
        echo = doc["config_echo"]
        chain = [_node_from_entry(i, e) for i, e in enumerate(echo["chain"])]
        cfg = PipelineConfig(chain, echo["repetitions"], echo["seed"])
        return cls(
            config_echo=cfg,
            git_revision=doc["git_revision"],
            timings=[StageTiming(**t) for t in doc["timings"]],
            tts=doc["tts"],
            t_overhead=doc["t_overhead"],
            metrics=doc["metrics"],
            started_at=doc["started_at"],
            repetition=doc.get("repetition", 0),
            status=doc.get("status", "ok"),
            error=doc.get("error"),
            warnings=list(doc.get("warnings", [])),
        )


def _sanitize(obj, path, warnings):
    if isinstance(obj, float) and not math.isfinite(obj):
        warnings.append(path)
        return "NaN" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _sanitize(v, f"{path}.{k}", warnings) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v, f"{path}[{i}]", warnings) for i, v in enumerate(obj)]
    return obj


def _restore(doc, path: str):
    """Turn the sentinel string at a warnings path back into a float."""
    parts = path.replace("]", "").replace("[", ".").split(".")[1:]
    target = doc
    for p in parts[:-1]:
        target = target[int(p)] if isinstance(target, list) else target[p]
    last = parts[-1]
    key = int(last) if isinstance(target, list) else last
    if isinstance(target[key], str) and target[key] in _SENTINELS:
        target[key] = _SENTINELS[target[key]]


def record_to_json_obj(record: BenchmarkRecord) -> dict:
    warnings = []
    doc = _sanitize(record.to_dict(), "record", warnings)
    doc["warnings"] = list(dict.fromkeys(record.warnings + warnings))
    return doc


def write_record(records, path) -> None:
    """Write one record or a list of records as a JSON array."""
    if isinstance(records, BenchmarkRecord):
        records = [records]
    path = Path(path)
    if not path.parent.is_dir():
        raise OSError(f"directory {path.parent} does not exist")
    payload = [record_to_json_obj(r) for r in records]
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, allow_nan=False)
        fh.write("\n")


def read_records(path) -> list:
    with open(path, encoding="utf-8") as fh:
        docs = json.load(fh)
    if isinstance(docs, dict):
        docs = [docs]
    out = []
    for doc in docs:
        for w in doc.get("warnings", []):
            if w.startswith("record."):
                _restore(doc, w)
        out.append(BenchmarkRecord.from_dict(doc))
    return out
