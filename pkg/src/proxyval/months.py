"""Year-month values with ordinal arithmetic."""

from __future__ import annotations

import datetime as dt
import re
from typing import NamedTuple

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


class Month(NamedTuple):
    year: int
    month: int

    @classmethod
    def parse(cls, text: str) -> "Month":
        m = _MONTH_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a YYYY-MM month: {text!r}")
        year, month = int(m.group(1)), int(m.group(2))
        if not 1 <= month <= 12:
            raise ValueError(f"month out of range: {text!r}")
        return cls(year, month)

    @classmethod
    def of(cls, day: dt.date) -> "Month":
        return cls(day.year, day.month)

    @classmethod
    def from_ordinal(cls, n: int) -> "Month":
        year, m0 = divmod(n, 12)
        return cls(year, m0 + 1)

    def ordinal(self) -> int:
        return self.year * 12 + self.month - 1

    def __add__(self, k: int) -> "Month":  # type: ignore[override]
        return Month.from_ordinal(self.ordinal() + k)

    def __sub__(self, other: "Month") -> int:
        return self.ordinal() - other.ordinal()

    def first_day(self) -> dt.date:
        return dt.date(self.year, self.month, 1)

    def n_days(self) -> int:
        return ((self + 1).first_day() - self.first_day()).days

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def month_range(start: Month, end: Month) -> list[Month]:
    """Inclusive range of months."""
    return [start + k for k in range(end - start + 1)]
