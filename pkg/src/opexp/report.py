"""Run manifests: a batch of check reports plus a verdict tally."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable

from . import __version__
from .checks import CheckReport, Verdict


def tally(reports: Iterable[CheckReport]) -> dict[str, int]:
    counts = Counter(r.verdict for r in reports)
    return {v.value: counts.get(v, 0) for v in Verdict}


@dataclass
class RunManifest:
    command_line: str
    reports: list[CheckReport] = field(default_factory=list)
    started_at: str | None = None
    tool_version: str = __version__

    @classmethod
    def start(cls, command_line: str, timestamp: bool = True) -> "RunManifest":
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
        return cls(command_line=command_line, started_at=stamp)

    @property
    def summary(self) -> dict[str, int]:
        return tally(self.reports)

    @property
    def refuted(self) -> int:
        return self.summary[Verdict.REFUTED.value]

    def exit_code(self) -> int:
        return 1 if self.refuted else 0

    def to_json_obj(self) -> dict:
        obj = {
            "tool_version": self.tool_version,
            "command_line": self.command_line,
            "started_at": self.started_at,
            "reports": [r.to_json_obj() for r in self.reports],
            "summary": self.summary,
        }
        validate_manifest_obj(obj)
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, allow_nan=False) + "\n"


class ManifestError(ValueError):
    pass


def validate_manifest_obj(obj: dict) -> None:
    """Raise :class:`ManifestError` unless the summary matches the reports
    and every verdict is consistent with its residuals."""
    reports = [CheckReport.from_json_obj(r) for r in obj["reports"]]
    if obj["summary"] != tally(reports):
        raise ManifestError(f"summary {obj['summary']} does not match report tally {tally(reports)}")
    for k, r in enumerate(reports):
        if not r.is_consistent():
            raise ManifestError(f"report {k} ({r.check_name}) has verdict {r.verdict.value} inconsistent with its residuals")
