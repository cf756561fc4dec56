"""Type converters between engine objects, JSON and markdown."""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Union
import sympy
from pydantic import BaseModel
from cartan_sub.models.responses import (
    CertificateModel,
    CharacterReport,
    DiffReport,
    FixtureReport,
    GridReport,
    ReportSummary,
    RigidityReport,
)

logger = logging.getLogger(__name__)

Report = Union[BaseModel, Dict[str, Any], Any]


def expr_to_str(expr: Any) -> str:
    """Deterministic text of a sympy expression (lexicographic term order)."""
    if isinstance(expr, sympy.Basic):
        return sympy.sstr(expr, order="lex")
    return str(expr)


def to_jsonable(value: Any) -> Any:
    """Convert reports, dataclass results and sympy values to plain JSON data."""
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {expr_to_str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, sympy.Integer):
        return int(value)
    if isinstance(value, sympy.Basic):
        return expr_to_str(value)
    return value


def to_json(report: Report) -> str:
    """JSON text with sorted keys; identical inputs give identical bytes."""
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"


def _table(header: List[str], rows: List[List[Any]]) -> List[str]:
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(str(cell) for cell in row) + " |")
    return lines


def _bullets(items: List[str]) -> List[str]:
    return [f"- `{item}`" for item in items] or ["- (none)"]


def character_report_to_markdown(report: CharacterReport) -> str:
    given = (("p", report.p), ("q", report.q), ("n", report.n))
    dims = ", ".join(f"{k}={v}" for k, v in given if v is not None)
    lines = [f"# Cartan characters: {report.geometry} ({dims})", ""]
    if report.constraint:
        lines += [f"Constraint: `{report.constraint}`", ""]
    lines += _table(["k", "s_k"], [[k + 1, s] for k, s in enumerate(report.s)])
    lines += ["", f"Top character: **{report.top}**", "", "## Seeds by row", ""]
    rows = sorted(report.seeds_by_row.items())
    lines += _table(["row", "count"], [[f"`{row}`", count] for row, count in rows])
    if report.notes:
        lines += ["", "## Notes", ""] + [f"- {note}" for note in report.notes]
    return "\n".join(lines) + "\n"


def diff_report_to_markdown(report: DiffReport) -> str:
    lines = [
        f"# Identity diff: {report.geometry}",
        "",
        f"Closed to order {report.order}. Status: **{report.status}**",
        "",
    ]
    if report.incompatible:
        lines += ["The derived relations reduce to 1 = 0.", ""]
    lines += ["## Catalogued only", ""] + _bullets(report.catalog_only)
    lines += ["", "## Derived only", ""] + _bullets(report.derived_only)
    lines += ["", f"Shared relations: {len(report.present_in_both)}"]
    return "\n".join(lines) + "\n"


def certificate_to_markdown(certificate: CertificateModel) -> str:
    """Render a certificate as a human-readable proof outline."""
    dims = ", ".join(f"{k}={v}" for k, v in certificate.dims.items())
    lines = [
        f"# Certificate: {certificate.scenario} ({dims})",
        "",
        f"Status: **{certificate.status}**",
        "",
        "Hypotheses:",
        "",
    ]
    lines += [f"- {h}" for h in certificate.hypotheses]
    for branch in certificate.branches:
        lines += ["", f"## Branch {branch.label}: {branch.status}", ""]
        lines += [f"- assumes {h}" for h in branch.hypotheses]
        for system in branch.systems:
            lines += [
                "",
                f"System *{system.label}*: {len(system.rows)} rows, "
                f"{len(system.unknowns)} unknowns, "
                f"{len(system.forced_zero)} forced to zero",
            ]
            if system.nonzero:
                lines += [f"  - nonzero pivot {k} = {v}" for k, v in sorted(system.nonzero.items())]
        if branch.relations:
            lines += ["", "Relations:", ""] + _bullets(branch.relations)
        if branch.characters is not None:
            lines += ["", f"Characters: {tuple(branch.characters)}"]
        lines += ["", f"Conclusion: {branch.conclusion}"]
    lines += ["", f"**Conclusion:** {certificate.conclusion}"]
    if certificate.witness is not None:
        lines += ["", "Counterexample witness:", "", "```"]
        lines += [" ".join(f"{v: .6f}" for v in row) for row in certificate.witness]
        lines += ["```"]
    if certificate.notes:
        lines += ["", "## Notes", ""] + [f"- {note}" for note in certificate.notes]
    return "\n".join(lines) + "\n"


def summary_to_markdown(summary: ReportSummary) -> str:
    lines = [
        "# Acceptance report",
        "",
        f"Seed {summary.seed}, truncation order {summary.truncation}: "
        f"{summary.passed} passed, {summary.failed} failed",
        "",
    ]
    rows = [[c.name, c.status, c.detail] for c in summary.checks]
    lines += _table(["check", "status", "detail"], rows)
    return "\n".join(lines) + "\n"


def _mapping_to_markdown(title: str, data: Dict[str, Any]) -> str:
    lines = [f"# {title}", ""]
    rows = []
    for key, value in sorted(data.items()):
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        rows.append([key, value])
    lines += _table(["field", "value"], rows)
    return "\n".join(lines) + "\n"


def to_markdown(report: Report) -> str:
    """Markdown rendering of any report the CLI produces."""
    if isinstance(report, CertificateModel):
        return certificate_to_markdown(report)
    if isinstance(report, CharacterReport):
        return character_report_to_markdown(report)
    if isinstance(report, DiffReport):
        return diff_report_to_markdown(report)
    if isinstance(report, ReportSummary):
        return summary_to_markdown(report)
    if hasattr(report, "to_markdown"):
        return report.to_markdown()
    titles = {
        GridReport: "Characteristics solution",
        RigidityReport: "Antisymmetric rigidity search",
        FixtureReport: "Rotating flow fixture",
    }
    title = titles.get(type(report), type(report).__name__)
    data = to_jsonable(report)
    if isinstance(report, FixtureReport):
        # per-sample tensors are too wide for a table
        data.pop("samples", None)
    return _mapping_to_markdown(title, data)


def render(report: Report, output_format: str = "json") -> str:
    """Render a report in the requested format ('json' or 'md')."""
    if output_format == "md":
        return to_markdown(report)
    return to_json(report)


def write_text(text: str, path: Union[str, Path]) -> Path:
    """Write a report atomically (temporary file in the target directory, then rename)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except OSError as e:
        logger.error(f"Failed to write report {target}: {e}")
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug(f"Wrote {target}")
    return target
