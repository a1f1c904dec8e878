"""
Verification reports: check records, JSON and markdown rendering.

The JSON layout is described by ``schema/report-v1.json``.  Everything
except the ``timing`` block is deterministic for a fixed configuration, so
:func:`report_body` is what reruns are compared on.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources

from . import __version__

__all__ = [
    "SCHEMA_VERSION",
    "STATUSES",
    "CheckRecord",
    "VerificationReport",
    "emit_report",
    "report_body",
    "load_schema",
    "validate_report",
    "exit_code",
]

SCHEMA_VERSION = "1.0"
STATUSES = ("pass", "inconclusive", "fail")
EXIT_CODES = {"pass": 0, "fail": 1, "inconclusive": 3}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


@dataclass
class CheckRecord:
    name: str
    status: str
    expected: object
    observed: object
    anchor: str
    counterexample: object = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        self.expected = _jsonable(self.expected)
        self.observed = _jsonable(self.observed)
        self.counterexample = _jsonable(self.counterexample)


@dataclass
class VerificationReport:
    checks: list[CheckRecord] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    complete: bool = True
    timing: dict[str, float] = field(default_factory=dict)

    def add(self, name, ok, expected, observed, anchor, counterexample=None, status=None):
        if any(c.name == name for c in self.checks):
            raise ValueError(f"duplicate check {name!r}")
        if status is None:
            status = "pass" if ok else "fail"
        rec = CheckRecord(name, status, expected, observed, anchor,
                          None if status == "pass" else counterexample)
        self.checks.append(rec)
        return rec

    def __getitem__(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def status(self) -> str:
        if not self.checks:
            return "pass" if self.complete else "fail"
        worst = max(STATUSES.index(c.status) for c in self.checks)
        if not self.complete:
            worst = STATUSES.index("fail")
        return STATUSES[worst]

    @property
    def summary(self) -> dict:
        counts = {s: sum(c.status == s for c in self.checks) for s in STATUSES}
        return {"total": len(self.checks), **counts, "status": self.status}

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "config": _jsonable(self.config),
            "complete": self.complete,
            "summary": self.summary,
            "checks": [asdict(c) for c in self.checks],
        }
        if timing:
            d["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return d


def exit_code(report: VerificationReport) -> int:
    """0 if every check passes, 1 on any failure, 3 if the worst status is inconclusive."""
    return EXIT_CODES[report.status]


def report_body(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(timing=False), indent=2, sort_keys=True, ensure_ascii=False)


def _cell(x) -> str:
    s = x if isinstance(x, str) else json.dumps(x, ensure_ascii=False)
    return s.replace("|", "\\|").replace("\n", " ")


def _markdown(report: VerificationReport) -> str:
    s = report.summary
    out = [
        "# Verification report",
        "",
        f"Status: **{s['status']}** ({s['pass']} pass, {s['fail']} fail, "
        f"{s['inconclusive']} inconclusive of {s['total']})"
        + ("" if report.complete else ", **incomplete run**"),
        "",
    ]
    groups: dict[str, list[CheckRecord]] = {}
    for c in report.checks:
        groups.setdefault(c.anchor, []).append(c)
    for anchor, recs in groups.items():
        out += [f"## {anchor}", "", "| check | status | expected | observed | anchor |",
                "|---|---|---|---|---|"]
        for c in recs:
            out.append(f"| {_cell(c.name)} | {c.status} | {_cell(c.expected)} | "
                       f"{_cell(c.observed)} | {_cell(c.anchor)} |")
        out.append("")
    failing = [c for c in report.checks if c.counterexample is not None]
    if failing:
        out += ["## Counterexamples", ""]
        for c in failing:
            out.append(f"- {c.name}: `{_cell(c.counterexample)}`")
        out.append("")
    return "\n".join(out)


def emit_report(report: VerificationReport, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if format == "markdown":
        return _markdown(report)
    raise ValueError(f"unknown report format {format!r} (use 'json' or 'markdown')")


def load_schema() -> dict:
    path = resources.files("a2boundary") / "schema" / "report-v1.json"
    return json.loads(path.read_text())


def validate_report(doc: dict | str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not match the schema."""
    import jsonschema

    if isinstance(doc, str):
        doc = json.loads(doc)
    jsonschema.validate(doc, load_schema())
