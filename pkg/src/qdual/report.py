"""Identity instances and verdict records."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from qdual.exact import LaurentPoly, diff_witness, rf_sum

MODES = ("symbolic", "point")
VARIANTS = ("as-printed", "corrected")


@dataclass(frozen=True)
class IdentityInstance:
    id: str
    params: tuple = ()
    mode: str = "symbolic"
    variant: str = "as-printed"
    mutation: Optional[str] = None

    @classmethod
    def make(cls, id: str, params: Mapping[str, int] | None = None, **kw) -> "IdentityInstance":
        return cls(id, tuple(sorted((params or {}).items())), **kw)

    @property
    def p(self) -> dict[str, int]:
        return dict(self.params)

    def sort_key(self):
        return (self.id, self.variant, self.params, self.mode, self.mutation or "")

    def to_json(self) -> dict:
        d = {"id": self.id, "params": self.p, "mode": self.mode, "variant": self.variant}
        if self.mutation:
            d["mutation"] = self.mutation
        return d


@dataclass
class IdentityReport:
    instance: IdentityInstance
    verdict: str
    witness: Any = None
    elapsed: float = 0.0
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if self.verdict not in ("holds", "fails"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if (self.verdict == "fails") != (self.witness is not None):
            raise ValueError("verdict 'fails' must carry a witness and 'holds' none")

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json(self, timing: bool = False) -> dict:
        d = {"type": "report", **self.instance.to_json(), "verdict": self.verdict}
        w = self.witness
        if isinstance(w, LaurentPoly):
            d["witness"] = w.to_json()
        else:
            d["witness"] = w
        if self.note:
            d["note"] = self.note
        if timing:
            d["elapsed"] = round(self.elapsed, 6)
        return d


def settle(instance: IdentityInstance, lhs, rhs, started: float | None = None) -> IdentityReport:
    """Symbolic verdict for two sides given as values or lists of summands."""
    if started is None:
        started = time.perf_counter()
    left = rf_sum(lhs) if isinstance(lhs, (list, tuple)) else lhs
    right = rf_sum(rhs) if isinstance(rhs, (list, tuple)) else rhs
    w = diff_witness(left, right)
    elapsed = time.perf_counter() - started
    if w.is_zero():
        return IdentityReport(instance, "holds", None, elapsed)
    return IdentityReport(instance, "fails", w.primitive(), elapsed)
