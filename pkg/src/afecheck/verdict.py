from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Status(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "UnknownAtBound"


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome of a bounded check.

    ``bound`` records the bounds the check ran under; ``certificate`` is a
    JSON-ready witness (counterexample for Fails, evidence for Holds).
    """

    status: Status
    bound: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)
    note: str = ""

    @classmethod
    def holds(cls, bound=None, note="", **certificate):
        return cls(Status.HOLDS, dict(bound or {}), certificate, note)

    @classmethod
    def fails(cls, bound=None, note="", **certificate):
        return cls(Status.FAILS, dict(bound or {}), certificate, note)

    @classmethod
    def unknown(cls, bound=None, note="", **certificate):
        return cls(Status.UNKNOWN, dict(bound or {}), certificate, note)

    def label(self) -> str:
        """Status with its bound, e.g. ``Holds(M=8)``."""
        if not self.bound:
            return self.status.value
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.bound.items()))
        return f"{self.status.value}({inner})"

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "label": self.label(), "bound": dict(self.bound),
               "certificate": self.certificate}
        if self.note:
            out["note"] = self.note
        return out
