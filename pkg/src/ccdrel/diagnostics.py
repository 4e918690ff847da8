from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

ERROR = "error"
WARNING = "warning"
NOTICE = "notice"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    line: Optional[int] = None
    col: Optional[int] = None

    @property
    def location(self) -> str:
        if self.line is None:
            return "-"
        return f"{self.line}:{self.col if self.col is not None else 1}"

    def __str__(self):
        return f"{self.location}: {self.severity}: {self.code}: {self.message}"

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "line": self.line,
            "col": self.col,
        }


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diags)
