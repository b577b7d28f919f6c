from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class TriBool:
    """Three-valued verdict.

    ``value`` is True, False or None (unknown).  A False verdict carries a
    witness that re-checks by exact evaluation; ``evidence`` records how the
    verdict was reached (``mode`` is "exact", "rays" or "budget").
    """

    value: bool | None
    witness: Any = None
    evidence: dict = field(default_factory=dict)

    @classmethod
    def true(cls, **evidence) -> TriBool:
        return cls(True, None, evidence)

    @classmethod
    def false(cls, witness, **evidence) -> TriBool:
        if witness is None:
            raise ValueError("a False verdict needs a witness")
        return cls(False, witness, evidence)

    @classmethod
    def unknown(cls, **evidence) -> TriBool:
        return cls(None, None, evidence)

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def __bool__(self) -> bool:
        raise TypeError("TriBool has no truth value; use .is_true / .is_false")

    def label(self) -> str:
        return {True: "True", False: "False", None: "Unknown"}[self.value]

    def __and__(self, other: TriBool) -> TriBool:
        if self.is_false:
            return self
        if other.is_false:
            return other
        if self.is_unknown:
            return self
        if other.is_unknown:
            return other
        ev = dict(self.evidence)
        for k, v in other.evidence.items():
            if k == "mode" and ev.get("mode") == "exact":
                ev[k] = v
            else:
                ev.setdefault(k, v)
        return TriBool(True, None, ev)
