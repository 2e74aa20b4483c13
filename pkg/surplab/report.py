"""Report assembly and deterministic JSON encoding."""
from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import humanize
import numpy as np

from . import __version__
from .graph import Cut, Graph, VertexSet

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SCHEMA_PATH = Path(__file__).with_name("report_schema.json")


@dataclass
class Report:
    command: str
    input_digest: str | None = None
    findings: dict[str, Any] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    timing: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    tool_version: str = __version__

    def set_timing(self, seconds: float) -> None:
        self.timing = {
            "seconds": seconds,
            "human": humanize.precisedelta(seconds, minimum_unit="milliseconds"),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "command": self.command,
            "input_digest": self.input_digest,
            "findings": to_jsonable(self.findings),
            "tolerances": to_jsonable(self.tolerances),
            "timing": to_jsonable(self.timing),
        }


def to_jsonable(obj: Any) -> Any:
    """Lower domain objects to plain JSON values (graphs become their summary)."""
    if isinstance(obj, (str, bool)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, VertexSet):
        return list(obj.members)
    if isinstance(obj, Cut):
        return list(obj.side)
    if isinstance(obj, Graph):
        return {"n": obj.n, "m": obj.m, "digest": obj.digest}
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _float_text(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return json.dumps(value)
    if isinstance(value, float):
        return _float_text(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{json.dumps(k)}: {_encode(value[k], indent, level + 1)}" for k in sorted(value)]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in value]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"unexpected value {value!r}")


def dumps(report: Report | dict[str, Any], indent: int = 2) -> str:
    """Sorted keys, floats at 17 significant digits, non-finite values as null."""
    data = report.to_dict() if isinstance(report, Report) else to_jsonable(report)
    return _encode(data, indent, 0) + "\n"


def write_report(report: Report, path: str | Path) -> None:
    Path(path).write_text(dumps(report))
    logger.info(f"Report written to {path}")


def load_schema() -> dict[str, Any]:
    return json.loads(SCHEMA_PATH.read_text())
