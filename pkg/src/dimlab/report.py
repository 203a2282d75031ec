"""Structured outcome of a single verification."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

VERIFIED = "VERIFIED"
FAILED = "FAILED"
PARTIAL = "PARTIAL"


@dataclass
class CheckReport:
    check: str
    params: dict = field(default_factory=dict)
    status: str = VERIFIED
    lhs_invariants: list | None = None
    rhs_invariants: list | None = None
    witnesses: list = field(default_factory=list)
    millis: int = 0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (VERIFIED, PARTIAL)

    def fail(self, reason: str, counterexample: Any = None) -> "CheckReport":
        self.status = FAILED
        self.details.setdefault("failures", []).append(reason)
        if counterexample is not None:
            self.witnesses.append({"counterexample": _jsonable(counterexample)})
        return self

    def require(self, cond: bool, reason: str, counterexample: Any = None) -> bool:
        if not cond:
            self.fail(reason, counterexample)
        return cond

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "params": _jsonable(self.params),
            "status": self.status,
            "lhs_invariants": self.lhs_invariants,
            "rhs_invariants": self.rhs_invariants,
            "witnesses": _jsonable(self.witnesses),
            "millis": self.millis,
        }
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


@contextmanager
def timed(report: CheckReport):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.millis = int((time.perf_counter() - t0) * 1000)
