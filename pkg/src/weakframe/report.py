"""JSON and text rendering of verification results.

JSON output is deterministic: keys keep insertion order, floats use Python's
shortest round-trip repr and non-finite numbers become the strings ``"inf"``
and ``"nan"``.
"""

from __future__ import annotations

import json
import math

from .structure import StructureClass, VerificationReport
from .theorems import CheckResult

__all__ = ["axioms_result", "render_json", "render_checks_text", "render_class_text", "clean"]


def clean(obj):
    """Recursively replace non-finite floats so the output is strict JSON."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    return obj


def render_json(doc: dict) -> str:
    return json.dumps(clean(doc), indent=2, allow_nan=False) + "\n"


def axioms_result(reports: list[VerificationReport]) -> CheckResult:
    return CheckResult("axioms", "satisfied", list(reports))


def _fmt(x) -> str:
    if x is None:
        return "-"
    return f"{x:.3e}"


def _point(pt) -> str:
    if pt is None:
        return "-"
    return "[" + ", ".join(f"{v:.6g}" for v in pt) + "]"


def render_checks_text(results: list[CheckResult], header: str = "") -> str:
    lines = []
    if header:
        lines.append(header)
    for res in results:
        verdict = "PASS" if res.passed else "FAIL"
        lines.append(f"{res.check_id}: {verdict} (hypotheses {res.hypothesis_status})")
        width = max((len(r.identity) for r in res.reports), default=0)
        for r in res.reports:
            line = f"  {r.identity:<{width}}  {r.status:<10}  {_fmt(r.max_residual):>10}  tol {r.tolerance:.0e}  {_point(r.worst_point)}"
            if r.note:
                line += f"  ({r.note})"
            lines.append(line)
    return "\n".join(lines) + "\n"


def render_class_text(cls: StructureClass) -> str:
    lines = [cls.describe()]
    for k in StructureClass.FLAGS:
        lines.append(f"  {k:<20} {'yes' if getattr(cls, k) else 'no'}")
    for k, v in cls.residuals.items():
        lines.append(f"  residual {k:<16} {v:.3e}")
    return "\n".join(lines) + "\n"
