from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of a verification: overall flag plus per-check failure messages."""

    ok: bool = True
    failures: dict[str, str] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def fail(self, key: str, msg: str) -> None:
        self.ok = False
        self.failures.setdefault(key, msg)

    def merge(self, other: "Report", prefix: str = "") -> "Report":
        for k, v in other.failures.items():
            self.fail(prefix + k, v)
        self.details.update(other.details)
        return self

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": dict(sorted(self.failures.items()))}
