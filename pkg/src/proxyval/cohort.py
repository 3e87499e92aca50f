"""Case/control assignment of purchase-log users.

A case switched to a target product after buying general food; its window is
the year before the first target purchase.  A control only ever bought
general food; its window is the year ending at its last general purchase
(or at a fixed dataset end, if configured).  Everyone else is excluded.
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import groupby
from operator import attrgetter
from typing import Iterable, Mapping, Sequence

from .ingest import PurchaseRecord

log = logging.getLogger(__name__)

WINDOW_DAYS = 365
ONE_DAY = dt.timedelta(days=1)


class CohortGroup(str, Enum):
    CASE = "case"
    CONTROL = "control"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class CohortRules:
    window_days: int = WINDOW_DAYS
    min_window_purchases: int = 1
    # "last_general" anchors control windows at the user's own last general
    # purchase; "dataset_end" anchors every control at ``dataset_end``.
    control_anchor: str = "last_general"
    dataset_end: dt.date | None = None

    def __post_init__(self):
        if self.window_days < 1:
            raise ValueError("window_days must be positive")
        if self.min_window_purchases < 1:
            raise ValueError("min_window_purchases must be at least 1")
        if self.control_anchor not in ("last_general", "dataset_end"):
            raise ValueError(f"unknown control anchor {self.control_anchor!r}")
        if self.control_anchor == "dataset_end" and self.dataset_end is None:
            raise ValueError("control_anchor='dataset_end' needs dataset_end")


@dataclass(frozen=True)
class CohortAssignment:
    user_id: str
    group: CohortGroup
    window_start: dt.date | None = None
    window_end: dt.date | None = None  # exclusive
    first_target_date: dt.date | None = None
    window_purchases: tuple[PurchaseRecord, ...] = field(default=(), repr=False)
    reason: str = ""


def assign_cohort(user_purchases: Sequence[PurchaseRecord], target_ids: frozenset[str],
                  general_ids: frozenset[str], rules: CohortRules = CohortRules()) -> CohortAssignment:
    """Assign one user's date-sorted purchases to a cohort group."""
    if not user_purchases:
        raise ValueError("no purchases for user")
    user = user_purchases[0].user_id
    window = dt.timedelta(days=rules.window_days)
    general: list[PurchaseRecord] = []
    first_target = None
    for p in user_purchases:
        pid = p.product_id
        if pid in general_ids:
            general.append(p)
        elif pid in target_ids:
            first_target = p.date
            break  # input is date-sorted, so this is the earliest target purchase

    if first_target is not None:
        general = [p for p in general if p.date < first_target]
        if not general:
            return CohortAssignment(user, CohortGroup.EXCLUDED, first_target_date=first_target,
                                    reason="no general purchase before first target")
        start, end = first_target - window, first_target
        group = CohortGroup.CASE
    elif general:
        if rules.control_anchor == "dataset_end":
            end = rules.dataset_end + ONE_DAY
        else:
            end = general[-1].date + ONE_DAY
        start = end - window
        group = CohortGroup.CONTROL
    else:
        return CohortAssignment(user, CohortGroup.EXCLUDED, reason="no general purchases")

    k = len(general)
    while k > 0 and general[k - 1].date >= end:
        k -= 1
    j = k
    while j > 0 and general[j - 1].date >= start:
        j -= 1
    in_window = tuple(general[j:k])
    if len(in_window) < rules.min_window_purchases:
        return CohortAssignment(user, CohortGroup.EXCLUDED, first_target_date=first_target,
                                reason="too few general purchases in window")
    return CohortAssignment(user, group, start, end, first_target, in_window)


def group_by_user(purchases: Iterable[PurchaseRecord]) -> dict[str, list[PurchaseRecord]]:
    """Group purchases per user, each list sorted by date (stable)."""
    by_user: dict[str, list[PurchaseRecord]] = {}
    for user, recs in groupby(purchases, attrgetter("user_id")):
        if user in by_user:
            by_user[user].extend(recs)
        else:
            by_user[user] = list(recs)
    by_date = attrgetter("date")
    for recs in by_user.values():
        recs.sort(key=by_date)
    return by_user


def assign_cohorts(purchases: Iterable[PurchaseRecord], target_ids: frozenset[str],
                   general_ids: frozenset[str], rules: CohortRules = CohortRules(),
                   workers: int = 1) -> tuple[CohortAssignment, ...]:
    """Assign every user; result is sorted by user_id whatever ``workers`` is."""
    by_user = group_by_user(purchases)
    users = sorted(by_user)

    def run(chunk: list[str]) -> list[CohortAssignment]:
        return [assign_cohort(by_user[u], target_ids, general_ids, rules) for u in chunk]

    if workers <= 1 or len(users) < 2:
        out = run(users)
    else:
        size = -(-len(users) // workers)
        chunks = [users[i:i + size] for i in range(0, len(users), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = [a for part in pool.map(run, chunks) for a in part]
    out.sort(key=lambda a: a.user_id)
    return tuple(out)


def cohort_summary(assignments: Iterable[CohortAssignment]) -> dict[str, int]:
    counts = Counter(a.group.value for a in assignments)
    summary = {g.value: counts.get(g.value, 0) for g in CohortGroup}
    summary["total"] = sum(summary.values())
    return summary


def by_group(assignments: Iterable[CohortAssignment],
             *groups: CohortGroup) -> list[CohortAssignment]:
    wanted = set(groups) or {CohortGroup.CASE, CohortGroup.CONTROL}
    return [a for a in assignments if a.group in wanted]


COHORT_COLUMNS = ("user_id", "group", "window_start", "window_end", "first_target_date")


def _iso(day: dt.date | None) -> str:
    return day.isoformat() if day else ""


def write_assignments(path, assignments: Iterable[CohortAssignment]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COHORT_COLUMNS)
        for a in assignments:
            w.writerow((a.user_id, a.group.value, _iso(a.window_start), _iso(a.window_end),
                        _iso(a.first_target_date)))


def read_assignments(path) -> list[dict]:
    """Read a cohort CSV back as plain rows (window purchases are not stored)."""
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def compare_to_truth(assignments: Sequence[CohortAssignment],
                     intended: Mapping[str, str]) -> list[tuple[str, str, str]]:
    """Return ``(user_id, assigned, intended)`` for every disagreement, logging each."""
    mismatches = []
    for a in assignments:
        want = intended.get(a.user_id)
        if want is not None and want != a.group.value:
            mismatches.append((a.user_id, a.group.value, want))
            log.info("cohort mismatch user=%s assigned=%s intended=%s reason=%s",
                     a.user_id, a.group.value, want, a.reason)
    return mismatches
