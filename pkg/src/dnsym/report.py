"""Verification report records and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from dnsym.symexpr import ZeroResult

NUMERIC = "numeric"


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    paper_locus: str
    status: str  # pass | fail | error
    verdict: str
    max_probe_error: float
    elapsed_ms: float | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @classmethod
    def make(cls, check_id: str, locus: str, ok: bool, verdict: ZeroResult, ms: float | None = None, detail: str = "") -> "CheckResult":
        return cls(check_id, locus, "pass" if ok else "fail", verdict.verdict.value, float(verdict.max_probe_error), ms, detail)

    @classmethod
    def numeric(cls, check_id: str, locus: str, ok: bool, error: float, ms: float | None = None, detail: str = "") -> "CheckResult":
        return cls(check_id, locus, "pass" if ok else "fail", NUMERIC, float(error), ms, detail)

    @classmethod
    def failure(cls, check_id: str, locus: str, exc: BaseException, ms: float | None = None) -> "CheckResult":
        return cls(check_id, locus, "error", "error", 0.0, ms, f"{type(exc).__name__}: {exc}")

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "check_id": self.check_id,
            "paper_locus": self.paper_locus,
            "status": self.status,
            "verdict": self.verdict,
            "max_probe_error": self.max_probe_error,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def combine(results: Iterable[CheckResult]) -> list[CheckResult]:
    """Sorted by check id; duplicate ids are an error in the suite definition."""
    out = sorted(results, key=lambda r: r.check_id)
    ids = [r.check_id for r in out]
    dup = {i for i in ids if ids.count(i) > 1}
    if dup:
        raise ValueError(f"duplicate check ids: {sorted(dup)}")
    return out


def to_json(results: Iterable[CheckResult], timing: bool = False) -> str:
    return json.dumps([r.to_dict(timing) for r in combine(results)], indent=2, sort_keys=True) + "\n"


def all_passed(results: Iterable[CheckResult]) -> bool:
    return all(r.passed for r in results)
