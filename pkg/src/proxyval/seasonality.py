"""Monthly series, STL decomposition and cross-series seasonal agreement."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cohort import CohortAssignment, CohortGroup
from .errors import BadSpan, NoCases, RangeMismatch, SeriesTooShort
from .ingest import ClaimSeriesRow
from .months import Month
from .numstat import TestResult, loess, pearson

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonthlySeries:
    start: Month
    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> Month:
        return self.start + (len(self.values) - 1)

    def months(self) -> list[Month]:
        return [self.start + k for k in range(len(self.values))]

    def shifted(self, lag: int) -> "MonthlySeries":
        """Same values relabelled ``lag`` months later."""
        return MonthlySeries(self.start + lag, self.values)


def claims_series(rows: Sequence[ClaimSeriesRow]) -> MonthlySeries:
    if not rows:
        raise SeriesTooShort("no claim rows")
    return MonthlySeries(rows[0].month, tuple(float(r.count) for r in rows))


def ec_onset_series(assignments: Iterable[CohortAssignment], start: Month | None = None,
                    end: Month | None = None) -> MonthlySeries:
    """Count cases by the month of their first target purchase.

    Without explicit bounds the range runs from the first to the last case
    month.  Cases outside an explicit range are ignored.
    """
    months = [Month.of(a.first_target_date) for a in assignments
              if a.group is CohortGroup.CASE and a.first_target_date is not None]
    if not months:
        raise NoCases("no case users to build an onset series from")
    start = start or min(months)
    end = end or max(months)
    values = [0.0] * (end - start + 1)
    for m in months:
        k = m - start
        if 0 <= k < len(values):
            values[k] += 1
    return MonthlySeries(start, tuple(values))


@dataclass(frozen=True)
class StlParams:
    period: int = 12
    seasonal_span: int = 7
    trend_span: int | None = None
    lowpass_span: int | None = None
    n_inner: int = 2
    n_outer: int = 1

    def resolved(self) -> "StlParams":
        trend = self.trend_span or default_trend_span(self.period, self.seasonal_span)
        lowpass = self.lowpass_span or _next_odd(self.period)
        return StlParams(self.period, self.seasonal_span, trend, lowpass, self.n_inner, self.n_outer)


def _next_odd(x: float) -> int:
    k = math.ceil(x - 1e-9)
    return k if k % 2 == 1 else k + 1


def default_trend_span(period: int, seasonal_span: int) -> int:
    """Smallest odd integer >= 1.5 * period / (1 - 1.5 / seasonal_span)."""
    return _next_odd(1.5 * period / (1.0 - 1.5 / seasonal_span))


@dataclass(frozen=True)
class StlResult:
    observed: np.ndarray
    trend: np.ndarray
    seasonal: np.ndarray
    remainder: np.ndarray
    weights: np.ndarray


def _moving_average(x: np.ndarray, length: int) -> np.ndarray:
    c = np.concatenate(([0.0], np.cumsum(x)))
    return (c[length:] - c[:-length]) / length


def _stl_inner(y: np.ndarray, rw: np.ndarray, trend: np.ndarray, p: StlParams):
    n, period = len(y), p.period
    seasonal = np.zeros(n)
    positions = np.arange(n, dtype=float)
    for _ in range(p.n_inner):
        detrended = y - trend
        # Cycle-subseries smoothing, extended one period at each end.
        cycle = np.empty(n + 2 * period)
        for j in range(period):
            idx = np.arange(j, n, period)
            k = len(idx)
            xs = np.arange(1, k + 1, dtype=float)
            fit = loess(xs, detrended[idx], p.seasonal_span, 1, rw[idx],
                        at=np.arange(0, k + 2, dtype=float))
            cycle[j::period][:k + 2] = fit
        # Low-pass filter of the cycle-subseries: MA(period), MA(period), MA(3), LOESS.
        low = _moving_average(_moving_average(_moving_average(cycle, period), period), 3)
        low = loess(positions, low, p.lowpass_span, 1)
        seasonal = cycle[period:period + n] - low
        trend = loess(positions, y - seasonal, p.trend_span, 1, rw)
    return trend, seasonal


def _robustness_weights(resid: np.ndarray) -> np.ndarray:
    abs_r = np.abs(resid)
    h = 6.0 * float(np.median(abs_r))
    if h == 0.0:
        return np.ones_like(resid)
    u = abs_r / h
    # Bisquare, snapped to exactly 1 and 0 within 0.1% of either end as in
    # the reference implementation.
    w = (1.0 - np.minimum(u, 1.0) ** 2) ** 2
    w[u <= 0.001] = 1.0
    w[u > 0.999] = 0.0
    return w


def _validate(p: StlParams, n: int) -> None:
    if p.period < 2:
        raise BadSpan(f"period must be at least 2, got {p.period}")
    for name in ("seasonal_span", "trend_span", "lowpass_span"):
        span = getattr(p, name)
        if span < 3 or span % 2 == 0:
            raise BadSpan(f"{name} must be an odd integer >= 3, got {span}")
    if p.n_inner < 1 or p.n_outer < 0:
        raise BadSpan("need n_inner >= 1 and n_outer >= 0")
    if n < 2 * p.period:
        raise SeriesTooShort(f"series of length {n} is shorter than two periods ({2 * p.period})")
    if n < 3 * p.period:
        log.warning("series of length %d covers fewer than three periods", n)


def stl(series: MonthlySeries | Sequence[float], params: StlParams = StlParams()) -> StlResult:
    """Additive seasonal-trend decomposition by LOESS.

    Each outer pass runs ``n_inner`` inner passes and then recomputes
    bisquare robustness weights from the remainder; ``n_outer = 0`` gives
    the non-robust fit.
    """
    y = np.asarray(series.values if isinstance(series, MonthlySeries) else series, dtype=float)
    p = params.resolved()
    _validate(p, len(y))
    rw = np.ones(len(y))
    trend = np.zeros(len(y))
    for k in range(p.n_outer + 1):
        trend, seasonal = _stl_inner(y, rw, trend, p)
        if k < p.n_outer:
            rw = _robustness_weights(y - trend - seasonal)
    remainder = y - trend - seasonal
    return StlResult(y, trend, seasonal, remainder, rw)


@dataclass(frozen=True)
class SeasonalAgreement:
    result: TestResult              # component-level Pearson r
    profile_result: TestResult      # r between calendar-month profiles
    profile_a: tuple[float, ...]    # mean seasonal value for Jan..Dec
    profile_b: tuple[float, ...]
    peak_month_a: int               # 1 = January
    peak_month_b: int
    best_lag: int                   # b delayed by this many months matches a best
    lag_correlations: dict[int, float]
    stl_a: StlResult
    stl_b: StlResult


def calendar_profile(series: MonthlySeries, seasonal: np.ndarray) -> tuple[float, ...]:
    sums = [0.0] * 12
    counts = [0] * 12
    for m, v in zip(series.months(), seasonal):
        sums[m.month - 1] += float(v)
        counts[m.month - 1] += 1
    return tuple(s / c if c else math.nan for s, c in zip(sums, counts))


def _corr(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    denom = math.sqrt(float(np.dot(a, a)) * float(np.dot(b, b)))
    return float(np.dot(a, b)) / denom if denom > 0 else math.nan


def lag_scan(a: np.ndarray, b: np.ndarray, max_lag: int = 3) -> dict[int, float]:
    """corr(a[t], b[t + k]) over the overlap, for k in [-max_lag, max_lag]."""
    n = len(a)
    out = {}
    for k in range(-max_lag, max_lag + 1):
        if k >= 0:
            out[k] = _corr(a[:n - k], b[k:])
        else:
            out[k] = _corr(a[-k:], b[:n + k])
    return out


def best_lag(correlations: dict[int, float]) -> int:
    # Ties go to the smallest |lag|, then to the negative side.
    return max(sorted(correlations, key=lambda k: (abs(k), k)),
               key=lambda k: correlations[k] if not math.isnan(correlations[k]) else -math.inf)


def seasonal_agreement(a: MonthlySeries, b: MonthlySeries, params: StlParams = StlParams(),
                       max_lag: int = 3) -> SeasonalAgreement:
    if a.start != b.start or len(a) != len(b):
        raise RangeMismatch(f"series cover {a.start}..{a.end} and {b.start}..{b.end}")
    sa, sb = stl(a, params), stl(b, params)
    result = pearson(sa.seasonal.tolist(), sb.seasonal.tolist())
    pa, pb = calendar_profile(a, sa.seasonal), calendar_profile(b, sb.seasonal)
    profile_result = pearson(list(pa), list(pb))
    lags = lag_scan(sa.seasonal, sb.seasonal, max_lag)
    return SeasonalAgreement(result, profile_result, pa, pb,
                             int(np.argmax(pa)) + 1, int(np.argmax(pb)) + 1,
                             best_lag(lags), lags, sa, sb)


def agreement_record(ag: SeasonalAgreement) -> dict:
    return {
        "r": ag.result.statistic,
        "p": ag.result.p_value,
        "n": ag.result.n,
        "profile_r": ag.profile_result.statistic,
        "profile_p": ag.profile_result.p_value,
        "peak_month_a": ag.peak_month_a,
        "peak_month_b": ag.peak_month_b,
        "best_lag": ag.best_lag,
        "lag_correlations": {str(k): v for k, v in sorted(ag.lag_correlations.items())},
    }


def write_stl(path, series: MonthlySeries, res: StlResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("month", "observed", "trend", "seasonal", "remainder"))
        for m, o, t, s, r in zip(series.months(), res.observed, res.trend, res.seasonal, res.remainder):
            w.writerow((str(m), repr(float(o)), repr(float(t)), repr(float(s)), repr(float(r))))
