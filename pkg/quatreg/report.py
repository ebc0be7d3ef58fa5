"""
Text and JSON rendering of check, derivative and identity reports
"""

from typing import List, Optional

import pandas as pd

from quatreg.models import CheckReport, DerivativeReport, IdentityReport, ResidualReport
from quatreg.utils import dump_json


def to_json(report) -> str:
    """Canonical machine-readable form; byte-identical for identical inputs"""
    return dump_json(report.model_dump(mode="json"))


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.3e}"


def _point_text(point: List[float]) -> str:
    return "(" + ", ".join(f"{v:g}" for v in point) + ")"


def _row(p: ResidualReport) -> dict:
    return {
        "#": p.index,
        "point": _point_text(p.point),
        "pde max": _fmt(p.pde_max),
        "forms max": _fmt(p.forms_max),
        "dq-left spread": _fmt(p.dq_left.spread if p.dq_left else None),
        "dq-right spread": _fmt(p.dq_right.spread if p.dq_right else None),
        "scale": _fmt(p.scale),
        "verdict": p.verdict.value,
    }


def check_table(report: CheckReport) -> pd.DataFrame:
    return pd.DataFrame([_row(p) for p in report.points])


def render_check(report: CheckReport) -> str:
    job = report.job
    lines = [
        f"f0 = {job.f0}",
        f"f1 = {job.f1}",
        f"mode {job.mode.value}, tolerances pde={job.tolerances.pde:g} "
        f"forms={job.tolerances.forms:g} limit={job.tolerances.limit:g}",
        "",
        check_table(report).to_string(index=False),
        "",
    ]
    for p in report.points:
        if p.error:
            lines.append(f"point {p.index}: error: {p.error}")
    s = report.summary
    lines.append(f"{s.regular} regular, {s.non_regular} non-regular, {s.errors} errors")
    return "\n".join(lines)


def render_derivative(report: DerivativeReport) -> str:
    lines = [
        f"f0' = {report.derivative_f0}",
        f"f1' = {report.derivative_f1}",
        "",
        render_check(report.check),
    ]
    return "\n".join(lines)


def render_identities(report: IdentityReport) -> str:
    table = pd.DataFrame([
        {
            "identity": r.name,
            "cases": r.cases,
            "max violation": f"{r.max_violation:.3e}",
            "tolerance": f"{r.tolerance:.0e}",
            "status": "pass" if r.passed else "FAIL",
        }
        for r in report.results
    ])
    lines = [f"seed {report.seed}, {report.samples} samples", "", table.to_string(index=False), ""]
    lines.extend(f"warning: {w}" for w in report.warnings)
    lines.append("all identities hold" if report.passed else "some identities failed")
    return "\n".join(lines)
