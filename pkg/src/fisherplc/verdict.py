from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    """Yes/no answer carrying the reason for a "no"."""

    ok: bool
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def yes(cls, **details) -> "Verdict":
        return cls(True, "", details)

    @classmethod
    def no(cls, reason: str, **details) -> "Verdict":
        return cls(False, reason, details)
