"""Machine-readable outcome of one verification."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class IdentityReport:
    check_id: str
    statement: str
    status: str
    residuals: list = field(default_factory=list)
    runtime_ms: int = 0
    note: str | None = None
    data: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @staticmethod
    def from_residuals(check_id, statement, pairs, note=None, data=None):
        """Build a pass/fail report; keeps only nonzero residuals."""
        bad = []
        for loc, r in pairs:
            if _nonzero(r):
                bad.append((loc, str(r)))
        return IdentityReport(
            check_id=check_id,
            statement=statement,
            status="pass" if not bad else "fail",
            residuals=bad,
            note=note,
            data=data,
        )

    @staticmethod
    def reported(check_id, statement, pairs=(), note=None, data=None):
        """Diagnostic that asserts nothing."""
        shown = [(loc, str(r)) for loc, r in pairs if _nonzero(r)]
        return IdentityReport(
            check_id=check_id,
            statement=statement,
            status="reported",
            residuals=shown,
            note=note,
            data=data,
        )

    def to_obj(self) -> dict:
        obj = {
            "check_id": self.check_id,
            "statement": self.statement,
            "status": self.status,
            "residuals": [[loc, text] for loc, text in self.residuals],
            "runtime_ms": self.runtime_ms,
        }
        if self.note is not None:
            obj["note"] = self.note
        if self.data is not None:
            obj["data"] = self.data
        return obj


def _nonzero(r) -> bool:
    if isinstance(r, str):
        return r not in ("0", "")
    if hasattr(r, "is_zero"):
        return not r.is_zero()
    return bool(r)
