"""Loading and validation of the four input tables.

All inputs are UTF-8 CSV files with a header row.  List-valued fields
(ingredients, exposures) use ``;`` as the separator.  Ingredient tokens are
NFKC-normalized and case-folded at load time; product names keep their
original spelling and are normalized by the classifier when matched.
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
import unicodedata
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import (
    BadDate,
    DuplicateAnimalId,
    DuplicateProductId,
    EmptyInput,
    IngestError,
    MalformedRow,
    MissingColumn,
    NegativeCount,
    NonContiguousMonths,
    NonPositiveQuantity,
    UnknownCategory,
    UnknownFoodForm,
    UnknownGroup,
)
from .months import Month

log = logging.getLogger(__name__)

PURCHASE_COLUMNS = ("user_id", "date", "product_id", "quantity")
CATALOG_COLUMNS = ("product_id", "name", "category", "food_form", "ingredients")
CLAIM_COLUMNS = ("month", "count")
QUESTIONNAIRE_COLUMNS = ("animal_id", "group", "exposures")
LIST_SEP = ";"


def normalize_token(text: str) -> str:
    """NFKC-normalize, case-fold and collapse internal whitespace."""
    return " ".join(unicodedata.normalize("NFKC", text).casefold().split())


def split_tokens(field: str) -> frozenset[str]:
    tokens = (normalize_token(t) for t in field.split(LIST_SEP))
    return frozenset(t for t in tokens if t)


class Category(str, Enum):
    GENERAL = "general"
    THERAPEUTIC = "therapeutic"


class FoodForm(str, Enum):
    WET = "wet"
    DRY = "dry"
    OTHER = "other"


class Group(str, Enum):
    CASE = "case"
    CONTROL = "control"


class PurchaseRecord(NamedTuple):
    user_id: str
    date: dt.date
    product_id: str
    quantity: int


@dataclass(frozen=True)
class ProductEntry:
    product_id: str
    name: str
    category: Category
    food_form: FoodForm
    ingredients: frozenset[str]


class ClaimSeriesRow(NamedTuple):
    month: Month
    count: int


class QuestionnaireRecord(NamedTuple):
    animal_id: str
    group: Group
    exposures: frozenset[str]


class Table(tuple):
    """An immutable sequence of records plus the rows skipped in lenient mode."""

    def __new__(cls, records: Iterable, skipped: Sequence[IngestError] = ()):
        obj = super().__new__(cls, records)
        obj.skipped = tuple(skipped)
        return obj

    @property
    def n_rows(self) -> int:
        return len(self) + len(self.skipped)


def _rows(path: str | Path, required: Sequence[str]) -> Iterator[tuple[int, dict | None]]:
    """Yield ``(line_number, row)`` for data rows; the header is line 1.

    ``row`` is None when the field count is wrong.
    """
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyInput(f"{path}: empty file, expected header {','.join(required)}")
        header = [h.strip() for h in reader.fieldnames]
        reader.fieldnames = header
        missing = [c for c in required if c not in header]
        if missing:
            raise MissingColumn(f"{path}: missing column(s) {', '.join(missing)}", line=1)
        for row in reader:
            line = reader.line_num
            if None in row or any(row.get(c) is None for c in required):
                yield line, None
            else:
                yield line, row


class _Collector:
    """Routes row errors: raise in strict mode, tally in lenient mode."""

    def __init__(self, strict: bool, path):
        self.strict = strict
        self.path = path
        self.skipped: list[IngestError] = []

    def malformed(self, line: int) -> None:
        self.reject(MalformedRow("wrong number of fields", line=line))

    def reject(self, err: IngestError) -> None:
        if self.strict:
            raise err
        self.skipped.append(err)

    def finish(self) -> None:
        if self.skipped:
            kinds = Counter(type(e).__name__ for e in self.skipped)
            log.warning("%s: skipped %d row(s): %s", self.path, len(self.skipped),
                        ", ".join(f"{k}={v}" for k, v in sorted(kinds.items())))


def parse_date(text: str) -> dt.date:
    return dt.date.fromisoformat(text.strip())


def load_purchases(path: str | Path, strict: bool = True) -> Table:
    """Read a purchase log, sorted by (user_id, date) with input order as tiebreak."""
    out = []
    col = _Collector(strict, path)
    for line, row in _rows(path, PURCHASE_COLUMNS):
        if row is None:
            col.malformed(line)
            continue
        user, product = row["user_id"].strip(), row["product_id"].strip()
        if not user or not product:
            col.reject(MalformedRow("empty user_id or product_id", line=line))
            continue
        try:
            day = parse_date(row["date"])
        except ValueError:
            col.reject(BadDate(f"invalid date {row['date']!r}", line=line))
            continue
        try:
            qty = int(row["quantity"])
        except ValueError:
            col.reject(MalformedRow(f"invalid quantity {row['quantity']!r}", line=line))
            continue
        if qty < 1:
            col.reject(NonPositiveQuantity(f"quantity {qty} < 1", line=line))
            continue
        out.append((user, day, line, PurchaseRecord(user, day, product, qty)))
    col.finish()
    out.sort(key=lambda t: t[:3])
    return Table((t[3] for t in out), col.skipped)


def purchase_summary(records: Sequence[PurchaseRecord]) -> dict:
    users = {r.user_id for r in records}
    dates = [r.date for r in records]
    return {
        "n_records": len(records),
        "n_users": len(users),
        "n_products": len({r.product_id for r in records}),
        "first_date": min(dates).isoformat() if dates else None,
        "last_date": max(dates).isoformat() if dates else None,
    }


def load_catalog(path: str | Path, strict: bool = True) -> Mapping[str, ProductEntry]:
    entries: dict[str, ProductEntry] = {}
    col = _Collector(strict, path)
    for line, row in _rows(path, CATALOG_COLUMNS):
        if row is None:
            col.malformed(line)
            continue
        pid = row["product_id"].strip()
        if not pid:
            col.reject(MalformedRow("empty product_id", line=line))
            continue
        if pid in entries:
            col.reject(DuplicateProductId(f"product_id {pid!r} repeated", line=line))
            continue
        try:
            category = Category(normalize_token(row["category"]))
        except ValueError:
            col.reject(UnknownCategory(f"category {row['category']!r}", line=line))
            continue
        try:
            form = FoodForm(normalize_token(row["food_form"]))
        except ValueError:
            col.reject(UnknownFoodForm(f"food_form {row['food_form']!r}", line=line))
            continue
        entries[pid] = ProductEntry(pid, row["name"].strip(), category, form,
                                    split_tokens(row["ingredients"]))
    col.finish()
    return MappingProxyType(dict(sorted(entries.items())))


def catalog_summary(catalog: Mapping[str, ProductEntry]) -> dict:
    by_category = Counter(e.category.value for e in catalog.values())
    by_form = Counter(e.food_form.value for e in catalog.values())
    vocab = set().union(*(e.ingredients for e in catalog.values())) if catalog else set()
    return {
        "n_products": len(catalog),
        "general": by_category.get("general", 0),
        "therapeutic": by_category.get("therapeutic", 0),
        "wet": by_form.get("wet", 0),
        "dry": by_form.get("dry", 0),
        "other": by_form.get("other", 0),
        "n_ingredients": len(vocab),
    }


def load_claim_series(path: str | Path) -> Table:
    """Read monthly claim counts; months must be contiguous and increasing."""
    rows: list[ClaimSeriesRow] = []
    for line, row in _rows(path, CLAIM_COLUMNS):
        if row is None:
            raise MalformedRow("wrong number of fields", line=line)
        try:
            month = Month.parse(row["month"])
        except ValueError:
            raise BadDate(f"invalid month {row['month']!r}", line=line) from None
        try:
            count = int(row["count"])
        except ValueError:
            raise MalformedRow(f"invalid count {row['count']!r}", line=line) from None
        if count < 0:
            raise NegativeCount(f"count {count} < 0", line=line)
        if rows and month != rows[-1].month + 1:
            raise NonContiguousMonths(
                f"expected {rows[-1].month + 1} after {rows[-1].month}, got {month}", line=line)
        rows.append(ClaimSeriesRow(month, count))
    return Table(rows)


def load_questionnaire(path: str | Path, strict: bool = True) -> Table:
    records: dict[str, QuestionnaireRecord] = {}
    col = _Collector(strict, path)
    for line, row in _rows(path, QUESTIONNAIRE_COLUMNS):
        if row is None:
            col.malformed(line)
            continue
        aid = row["animal_id"].strip()
        if not aid:
            col.reject(MalformedRow("empty animal_id", line=line))
            continue
        if aid in records:
            col.reject(DuplicateAnimalId(f"animal_id {aid!r} repeated", line=line))
            continue
        try:
            group = Group(normalize_token(row["group"]))
        except ValueError:
            col.reject(UnknownGroup(f"group {row['group']!r}", line=line))
            continue
        records[aid] = QuestionnaireRecord(aid, group, split_tokens(row["exposures"]))
    col.finish()
    return Table(sorted(records.values(), key=lambda r: r.animal_id), col.skipped)


def questionnaire_summary(records: Iterable[QuestionnaireRecord]) -> dict:
    counts = Counter(r.group.value for r in records)
    return {"case": counts.get("case", 0), "control": counts.get("control", 0)}


# Writers produce exactly the format the loaders read back.

def _write(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _join(tokens: Iterable[str]) -> str:
    return LIST_SEP.join(sorted(tokens))


def write_purchases(path, records: Iterable[PurchaseRecord]) -> None:
    _write(path, PURCHASE_COLUMNS,
           ((r.user_id, r.date.isoformat(), r.product_id, r.quantity) for r in records))


def write_catalog(path, catalog: Mapping[str, ProductEntry]) -> None:
    _write(path, CATALOG_COLUMNS,
           ((e.product_id, e.name, e.category.value, e.food_form.value, _join(e.ingredients))
            for _, e in sorted(catalog.items())))


def write_claim_series(path, rows: Iterable[ClaimSeriesRow]) -> None:
    _write(path, CLAIM_COLUMNS, ((str(r.month), r.count) for r in rows))


def write_questionnaire(path, records: Iterable[QuestionnaireRecord]) -> None:
    _write(path, QUESTIONNAIRE_COLUMNS,
           ((r.animal_id, r.group.value, _join(r.exposures)) for r in records))
