"""Command reports and their text/JSON encodings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__


@dataclass
class Report:
    command: str
    inputs: dict
    status: str  # "pass", "fail", "result" or "error"
    window: int | None = None
    violations: list = field(default_factory=list)  # [{"witness": [...], "residual": str}]
    solutions: Any = field(default_factory=dict)
    closed_forms: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "status": self.status,
            "window": self.window,
            "violations": self.violations,
            "solutions": self.solutions,
            "closed_forms": self.closed_forms,
            "version": __version__,
        }


def _text_lines(value, indent: int) -> list:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return [pad + "(none)"]
        out = []
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out.extend(_text_lines(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar_text(v)}")
        return out
    if isinstance(value, list):
        if not value:
            return [pad + "(none)"]
        out = []
        for v in value:
            if isinstance(v, (dict, list)) and v:
                sub = _text_lines(v, indent + 1)
                out.append(pad + "- " + sub[0].lstrip())
                out.extend(sub[1:])
            else:
                out.append(f"{pad}- {_scalar_text(v)}")
        return out
    return [pad + _scalar_text(value)]


def _scalar_text(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "(none)"
    return str(v)


def render_text(report: Report) -> str:
    lines = [f"{report.command}: {report.status}"]
    if report.window is not None:
        lines.append(f"window: {report.window}")
    if report.inputs:
        lines.append("inputs:")
        lines.extend(_text_lines(report.inputs, 1))
    if report.violations or report.status in ("pass", "fail"):
        lines.append(f"violations: {len(report.violations)}")
        for v in report.violations:
            lines.append(f"  {' '.join(v['witness'])}: {v['residual']}")
    if report.solutions:
        lines.append("solutions:")
        lines.extend(_text_lines(report.solutions, 1))
    if report.closed_forms:
        lines.append("closed forms:")
        lines.extend(f"  {k} = {report.closed_forms[k]}" for k in sorted(report.closed_forms))
    lines.append(f"version: {__version__}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "text") -> bytes:
    """Encode a report; identical reports give identical bytes."""
    if fmt == "json":
        text = json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    elif fmt == "text":
        text = render_text(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return text.encode("utf-8")


__all__ = ["Report", "emit_report", "render_text"]
