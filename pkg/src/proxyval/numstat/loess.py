"""Nearest-neighbour LOESS with tricube weights (degree 0 or 1).

The bandwidth at a target point is the distance to its ``span``-th nearest
data point; that point and anything farther get zero weight.  When ``span``
exceeds the number of points the bandwidth is widened by
``(span - n) // 2`` mean spacings (integer division), which is how STL smooths short
cycle-subseries with a long seasonal span.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import LengthMismatch, NonMonotoneX, SpanTooSmall


def tricube(u: np.ndarray) -> np.ndarray:
    u = np.clip(np.abs(u), 0.0, 1.0)
    return (1.0 - u**3) ** 3


def _check(xs: np.ndarray, ys: np.ndarray, span: int, degree: int,
           weights: np.ndarray | None) -> None:
    if degree not in (0, 1):
        raise ValueError(f"degree must be 0 or 1, got {degree}")
    if xs.shape != ys.shape or xs.ndim != 1:
        raise LengthMismatch("xs and ys must be 1-D with equal length")
    if weights is not None and weights.shape != xs.shape:
        raise LengthMismatch("robustness weights must match the data length")
    if span < degree + 1:
        raise SpanTooSmall(f"span {span} < degree + 1 = {degree + 1}")
    if len(xs) == 0:
        raise LengthMismatch("no data points")
    if np.any(np.diff(xs) <= 0):
        raise NonMonotoneX("xs must be strictly increasing")


def _bandwidth(dist: np.ndarray, span: int, spacing: float) -> float:
    n = len(dist)
    if span <= n:
        return float(np.partition(dist, span - 1)[span - 1])
    return float(dist.max()) + ((span - n) // 2) * spacing


def _fit_one(xs, ys, rw, x0, span, degree, spacing, x_range):
    dist = np.abs(xs - x0)
    h = _bandwidth(dist, span, spacing)
    if h <= 0.0:
        w = (dist == 0).astype(float)
    else:
        w = tricube(dist / h)
    if rw is not None:
        w = w * rw
    sw = w.sum()
    if sw <= 0.0:
        return None
    w = w / sw
    xbar = float(np.dot(w, xs))
    fit = float(np.dot(w, ys))
    if degree == 1:
        dx = xs - xbar
        c = float(np.dot(w, dx * dx))
        # Same guard as the reference STL code: skip the slope when the
        # weighted x-spread is negligible relative to the data range.
        if np.sqrt(c) > 1e-3 * x_range:
            slope = float(np.dot(w, dx * ys)) / c
            fit += slope * (x0 - xbar)
    return fit


def loess(xs: Sequence[float], ys: Sequence[float], span: int, degree: int = 1,
          weights: Sequence[float] | None = None,
          at: Sequence[float] | None = None) -> np.ndarray:
    """Smooth ``ys`` against ``xs``.

    Fitted values are returned at ``xs`` (default) or at the points ``at``,
    which may lie outside the data range.  A target whose window carries no
    weight takes the observed value at the nearest data point.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    rw = None if weights is None else np.asarray(weights, dtype=float)
    span = int(span)
    _check(xs, ys, span, degree, rw)
    targets = xs if at is None else np.asarray(at, dtype=float)
    n = len(xs)
    x_range = float(xs[-1] - xs[0])
    spacing = x_range / (n - 1) if n > 1 else 1.0
    out = np.empty(len(targets))
    for k, x0 in enumerate(targets):
        fit = _fit_one(xs, ys, rw, float(x0), span, degree, spacing, x_range)
        if fit is None:
            fit = float(ys[np.argmin(np.abs(xs - x0))])
        out[k] = fit
    return out
