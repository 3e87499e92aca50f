"""LOESS against a direct weighted least-squares fit at each point."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxyval.errors import LengthMismatch, NonMonotoneX, SpanTooSmall
from proxyval.numstat import loess, tricube


def normal_equation_fit(xs, ys, span, degree, at=None, weights=None):
    """Solve the 2x2 (or 1x1) weighted normal equations at every target."""
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    n = len(xs)
    spacing = (xs[-1] - xs[0]) / (n - 1)
    out = []
    for x0 in (xs if at is None else at):
        d = np.abs(xs - x0)
        h = np.sort(d)[span - 1] if span <= n else d.max() + ((span - n) // 2) * spacing
        u = np.minimum(d / h, 1.0)
        w = (1 - u**3) ** 3
        if weights is not None:
            w = w * weights
        if degree == 0:
            out.append(np.sum(w * ys) / np.sum(w))
            continue
        a = np.array([[w.sum(), (w * xs).sum()], [(w * xs).sum(), (w * xs * xs).sum()]])
        b = np.array([(w * ys).sum(), (w * xs * ys).sum()])
        beta = np.linalg.solve(a, b)
        out.append(beta[0] + beta[1] * x0)
    return np.array(out)


def random_points(seed, n=200):
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.uniform(0, 10, n))
    ys = np.sin(xs) + rng.normal(0, 0.3, n)
    return xs, ys


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("span,degree", [(15, 1), (41, 1), (199, 1), (25, 0)])
def test_matches_normal_equations(seed, span, degree):
    xs, ys = random_points(seed)
    got = loess(xs, ys, span, degree)
    assert np.max(np.abs(got - normal_equation_fit(xs, ys, span, degree))) <= 1e-10


def test_matches_with_weights_and_external_targets():
    xs, ys = random_points(7, 60)
    rw = np.random.default_rng(1).uniform(0.2, 1.0, 60)
    at = np.linspace(-1, 11, 25)
    got = loess(xs, ys, 21, 1, weights=rw, at=at)
    assert np.max(np.abs(got - normal_equation_fit(xs, ys, 21, 1, at=at, weights=rw))) <= 1e-10


@pytest.mark.parametrize("span", [7, 8, 11])
def test_span_wider_than_data(span):
    xs = np.arange(1.0, 7.0)
    ys = np.array([1.0, 3.0, 2.0, 5.0, 4.0, 6.0])
    at = np.arange(0.0, 8.0)
    got = loess(xs, ys, span, 1, at=at)
    assert np.max(np.abs(got - normal_equation_fit(xs, ys, span, 1, at=at))) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 80), st.floats(-5, 5), st.floats(-100, 100), st.integers(0, 2**32 - 1))
def test_degree_one_reproduces_lines(n, slope, intercept, seed):
    # Spacing and span keep every local window well spread; a window whose
    # weighted x-spread is below 0.1% of the data range deliberately falls
    # back to a local mean (see test_slope_guard_on_degenerate_window).
    rng = np.random.default_rng(seed)
    xs = np.cumsum(rng.uniform(0.5, 1.5, n))
    ys = intercept + slope * xs
    span = int(rng.integers(4, n + 5))
    scale = max(1.0, float(np.max(np.abs(ys))))
    assert np.max(np.abs(loess(xs, ys, span, 1) - ys)) <= 1e-12 * scale


def test_slope_guard_on_degenerate_window():
    xs = np.concatenate(([0.0, 0.001], np.arange(1.0, 2001.0)))
    fit = loess(xs, xs, 3, 1)
    # The window at 0 holds two points 0.001 apart: spread far below 0.1% of
    # the range, so the slope is dropped and the fit is their weighted mean.
    assert fit[0] == pytest.approx(0.0005, abs=1e-6)
    assert np.max(np.abs(fit[3:-1] - xs[3:-1])) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 50), st.floats(-100, 100))
def test_constant_input_is_a_fixed_point(n, c):
    xs = np.arange(n, dtype=float)
    for degree in (0, 1):
        assert np.allclose(loess(xs, np.full(n, c), max(2, n // 2), degree), c, rtol=0, atol=1e-12)


def test_tricube_shape():
    u = np.array([-2.0, -1.0, 0.0, 0.5, 1.0])
    assert tricube(u).tolist() == pytest.approx([0.0, 0.0, 1.0, (1 - 0.125) ** 3, 0.0])


def test_input_checks():
    with pytest.raises(NonMonotoneX):
        loess([0, 2, 1], [1, 2, 3], 3)
    with pytest.raises(LengthMismatch):
        loess([0, 1, 2], [1, 2], 3)
    with pytest.raises(SpanTooSmall):
        loess([0, 1, 2], [1, 2, 3], 1, 1)
    with pytest.raises(ValueError):
        loess([0, 1, 2], [1, 2, 3], 3, 2)
