"""Chi-squared, Pearson/Spearman correlation and the Cochran-Armitage trend test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import (
    DegenerateMargin,
    DegenerateVariance,
    DomainError,
    LengthMismatch,
    TooFewPoints,
    ZeroVariance,
)
from .special import chi2_sf, normal_sf_two_sided, student_t_sf_two_sided


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    df: float | None = None
    n: int | None = None

    __test__ = False  # keep pytest from collecting this class

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise DomainError(f"p-value outside [0, 1]: {self.p_value}")


@dataclass(frozen=True)
class TwoByTwoTable:
    """Rows exposed/unexposed, columns case/control."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise DomainError(f"negative cell count in {self}")

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (self.c, self.d)


@dataclass(frozen=True)
class TrendGroup:
    score: float
    cases: int
    total: int


@dataclass(frozen=True)
class TrendTable:
    groups: tuple[TrendGroup, ...]

    def __post_init__(self):
        if len(self.groups) < 2:
            raise DomainError("a trend table needs at least two groups")
        for g in self.groups:
            if not 0 <= g.cases <= g.total:
                raise DomainError(f"need 0 <= cases <= total, got {g}")
        scores = [g.score for g in self.groups]
        if any(s1 >= s2 for s1, s2 in zip(scores, scores[1:])):
            raise DomainError("scores must be strictly increasing")

    @classmethod
    def from_counts(cls, cases: Sequence[int], totals: Sequence[int],
                    scores: Sequence[float] | None = None) -> "TrendTable":
        if scores is None:
            scores = range(len(cases))
        if not len(cases) == len(totals) == len(scores):
            raise LengthMismatch("cases, totals and scores differ in length")
        return cls(tuple(TrendGroup(float(s), int(r), int(n))
                         for s, r, n in zip(scores, cases, totals)))


def chi_squared_2x2(t: TwoByTwoTable, yates: bool = False) -> TestResult:
    """Pearson chi-squared test of independence on a 2x2 table (df = 1).

    No continuity correction unless ``yates`` is set.
    """
    (a, b), (c, d) = t.rows()
    n = t.total
    row1, row2 = a + b, c + d
    col1, col2 = a + c, b + d
    if min(row1, row2, col1, col2) == 0:
        raise DegenerateMargin(f"zero margin in table {t}")
    stat = 0.0
    for obs, r, k in ((a, row1, col1), (b, row1, col2), (c, row2, col1), (d, row2, col2)):
        exp = r * k / n
        dev = abs(obs - exp)
        if yates:
            dev = max(0.0, dev - 0.5)
        stat += dev * dev / exp
    return TestResult(stat, chi2_sf(stat, 1), df=1, n=n)


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def pearson(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Pearson r with a two-sided p-value from the t distribution (n - 2 df)."""
    if len(x) != len(y):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise TooFewPoints(f"need at least 3 points, got {n}")
    mx, my = _mean(x), _mean(y)
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(v * v for v in dx)
    syy = math.fsum(v * v for v in dy)
    if sxx == 0 or syy == 0:
        raise ZeroVariance("correlation undefined for a constant input")
    sxy = math.fsum(u * v for u, v in zip(dx, dy))
    r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    df = n - 2
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
        p = student_t_sf_two_sided(t, df)
    return TestResult(r, p, df=df, n=n)


def rankdata(values: Sequence[float]) -> list[float]:
    """Ranks starting at 1, ties receiving their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Spearman rank correlation (Pearson on average ranks, t approximation for p)."""
    if len(x) != len(y):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(y)}")
    return pearson(rankdata(x), rankdata(y))


def cochran_armitage(t: TrendTable) -> TestResult:
    """Cochran-Armitage test for a linear trend in proportions.

    Returns the signed Z statistic and a two-sided normal p-value.
    """
    groups = t.groups
    big_n = sum(g.total for g in groups)
    big_r = sum(g.cases for g in groups)
    if big_n == 0:
        raise DegenerateVariance("no observations")
    pbar = big_r / big_n
    if pbar <= 0.0 or pbar >= 1.0:
        raise DegenerateVariance(f"pooled proportion is {pbar}")
    num = math.fsum(g.score * (g.cases - g.total * pbar) for g in groups)
    s2n = math.fsum(g.score * g.score * g.total for g in groups)
    sn = math.fsum(g.score * g.total for g in groups)
    spread = s2n - sn * sn / big_n
    if spread <= 1e-12 * max(1.0, s2n):
        raise DegenerateVariance("all observations carry the same score")
    z = num / math.sqrt(pbar * (1.0 - pbar) * spread)
    return TestResult(z, normal_sf_two_sided(z), n=big_n)
