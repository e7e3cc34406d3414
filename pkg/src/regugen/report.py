"""Check reports shared by the witness engine, the suites and the command line."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"

# where an expected value comes from
PUBLISHED = "published"
COMPUTED = "computed"
DIRECT = "direct"


def _plain(x):
    """JSON-safe value with integers kept exact (big ints become decimal strings)."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x if abs(x) < 2**53 else str(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, float):
        return repr(x)
    return str(x)


@dataclass
class Report:
    check: str
    status: str
    expected: object = None
    actual: object = None
    basis: str = DIRECT
    runtime_ms: int = 0
    detail: str = ""
    extra: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, check, expected, actual, basis=DIRECT, **kw):
        return cls(check, PASS if expected == actual else FAIL, expected, actual, basis, **kw)

    def to_dict(self, timing=True):
        d = {
            "check": self.check,
            "status": self.status,
            "expected": _plain(self.expected),
            "actual": _plain(self.actual),
            "basis": self.basis,
        }
        if self.detail:
            d["detail"] = self.detail
        if self.extra:
            d["extra"] = _plain(self.extra)
        if timing:
            d["runtime_ms"] = self.runtime_ms
        return d

    def to_json(self, timing=True):
        return json.dumps(self.to_dict(timing), sort_keys=True)


@contextmanager
def timed():
    box = {"ms": 0}
    t = time.perf_counter()
    try:
        yield box
    finally:
        box["ms"] = int((time.perf_counter() - t) * 1000)


def exit_code(reports):
    return 1 if any(r.status == FAIL for r in reports) else 0
