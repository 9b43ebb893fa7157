import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stripewalk import evolve, init_product, measure
from stripewalk.characteristics import (
    SUPPORT_THRESHOLDS,
    RunSeries,
    decay_exponent,
    height_ratio,
    loglog_fit,
    n_crit,
    oracle_series,
    peak_position,
    run_series,
    stable_subwindow,
    tail_exponent,
)

LEFT = np.array([1.0, 0.0])
PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)


def _synthetic_series(ns, mu_center, peak_val, peak_xbar=0.6, edge_slope=0.5):
    ns = np.asarray(ns, dtype=int)
    edge = ns * peak_xbar + ns.astype(float) ** edge_slope
    return RunSeries(
        label="synthetic",
        m=2,
        n=int(ns[-1]),
        delta=0.3,
        ns=ns,
        sum_re=np.ones_like(ns, dtype=float),
        max_abs_im=np.zeros_like(ns, dtype=float),
        min_re=np.zeros_like(ns, dtype=float),
        mu_center=np.asarray(mu_center, dtype=float),
        peak_xbar=np.full(len(ns), peak_xbar),
        peak_val=np.asarray(peak_val, dtype=float),
        edges={thr: edge for thr in SUPPORT_THRESHOLDS},
        norms=np.ones_like(ns, dtype=float),
    )


def test_n_crit_width_one_never_negative(hadamard):
    assert n_crit(hadamard, 1, 30, tol=0.0) == 30
    assert n_crit(hadamard, 1, 60, tol=0.0) == 60


def test_n_crit_requires_horizon(hadamard):
    with pytest.raises(ValueError, match="n_max"):
        n_crit(hadamard, 3, 10)


def test_n_crit_known_values(hadamard):
    # Frozen onsets of the exact dynamics (tolerance 1e-12, left spinor).
    assert n_crit(hadamard, 3, 40, g=LEFT) == 6
    assert n_crit(hadamard, 5, 40, g=LEFT) == 10
    assert n_crit(hadamard, 4, 40, g=LEFT) == 11


def test_peak_position_definition(hadamard):
    state = evolve(init_product(hadamard, LEFT, -1, 0, 402), 400)
    mu = measure(state)
    xbar = peak_position(mu, 0.3)
    assert 0.3 <= xbar <= 1.0
    assert abs(xbar - 1 / math.sqrt(3)) < 0.05


def test_peak_position_validation(hadamard):
    mu = measure(evolve(init_product(hadamard, LEFT, -1, 0, 12), 10))
    with pytest.raises(ValueError):
        peak_position(mu, 0.0)
    with pytest.raises(ValueError):
        peak_position(mu, 1.5)


def test_peak_position_tie_breaks_right():
    from stripewalk.walker import ComplexMeasure

    values = np.zeros(21, dtype=complex)
    values[14] = 0.3  # x = 4
    values[16] = 0.3  # x = 6: tie resolves toward larger x
    mu = ComplexMeasure(n=10, s=-1, t=0, offset=-10, values=values)
    assert peak_position(mu, 0.3) == 0.6


def test_peak_position_scale_invariant(hadamard):
    from stripewalk.walker import ComplexMeasure

    state = evolve(init_product(hadamard, LEFT, -1, 0, 202), 200)
    mu = measure(state)
    scaled = ComplexMeasure(
        n=mu.n, s=mu.s, t=mu.t, offset=mu.offset, values=3.7 * mu.values
    )
    assert peak_position(mu, 0.3) == peak_position(scaled, 0.3)


def test_height_ratio_parity_factor(hadamard):
    series = run_series(hadamard, 2, 400, g=LEFT)
    all_n = height_ratio(series, 201, 400)
    even = height_ratio(series, 201, 400, even_only=True)
    # The window holds equally many even and odd times and odd times
    # contribute exactly zero, so the factor is exactly two.
    assert abs(even / all_n - 2.0) < 1e-12


def test_height_ratio_window_validation(hadamard):
    series = run_series(hadamard, 2, 50, g=LEFT)
    with pytest.raises(ValueError):
        height_ratio(series, 40, 30)
    with pytest.raises(ValueError):
        height_ratio(series, 10, 100)


def test_height_ratio_rejects_vanishing_peak():
    ns = np.arange(1, 101)
    series = _synthetic_series(ns, np.ones(100), np.zeros(100))
    with pytest.raises(ValueError, match="vanishing"):
        height_ratio(series, 50, 100)


def test_loglog_fit_exact_power_law():
    ns = np.arange(100, 200)
    slope, intercept, rms = loglog_fit(ns, 3.0 * ns ** (-0.5))
    assert abs(slope + 0.5) < 1e-12
    assert abs(intercept - math.log(3.0)) < 1e-12
    assert rms < 1e-13


def test_decay_exponent_synthetic_power_law():
    ns = np.arange(1, 401)
    series = _synthetic_series(ns, ns ** (-0.5), 2.0 * ns ** (-0.7))
    center = decay_exponent(series, "center", (100, 400))
    side = decay_exponent(series, "side", (100, 400))
    assert abs(center.slope + 0.5) < 1e-10
    assert abs(side.slope + 0.7) < 1e-10
    with pytest.raises(ValueError):
        decay_exponent(series, "elsewhere", (100, 400))


def test_decay_exponent_rejects_sign_change():
    ns = np.arange(1, 201)
    vals = np.ones(200)
    vals[151] = -1.0  # n = 152, an even time inside the window
    series = _synthetic_series(ns, vals, np.ones(200))
    with pytest.raises(ValueError, match="sign"):
        decay_exponent(series, "center", (100, 200))


def test_decay_exponent_scale_invariant():
    ns = np.arange(1, 401)
    base = _synthetic_series(ns, ns ** (-0.5), ns ** (-0.5))
    scaled = _synthetic_series(ns, 17.0 * ns ** (-0.5), 17.0 * ns ** (-0.5))
    a = decay_exponent(base, "center", (100, 400)).slope
    b = decay_exponent(scaled, "center", (100, 400)).slope
    assert abs(a - b) < 1e-12


def test_tail_exponent_synthetic():
    ns = np.arange(1, 801)
    series = _synthetic_series(ns, np.ones(800), np.ones(800), edge_slope=0.4)
    fit = tail_exponent(series, (200, 800))
    assert abs(fit.slope - 0.4) < 1e-6
    assert not fit.oscillating
    assert set(fit.sensitivity) == {"1e-10", "1e-14"}


def test_tail_exponent_needs_points():
    ns = np.arange(1, 30)
    series = _synthetic_series(ns, np.ones(29), np.ones(29))
    with pytest.raises(ValueError, match="tail widths"):
        tail_exponent(series, (25, 29))


def test_stable_subwindow_selects_clean_region():
    ns = np.arange(100, 900)
    ys = ns ** 0.5
    mask, oscillating = stable_subwindow(ns, ys)
    assert mask.all() and not oscillating
    wobble = ys.copy()
    wobble[:400] *= np.exp(np.sin(np.linspace(0, 20, 400)))
    mask, oscillating = stable_subwindow(ns, wobble)
    assert oscillating
    assert mask.sum() < len(ns)
    assert mask[-1]  # the clean upper region survives


def test_run_series_determinism(hadamard):
    a = run_series(hadamard, 3, 60, g=PLUS)
    b = run_series(hadamard, 3, 60, g=PLUS)
    assert np.array_equal(a.sum_re, b.sum_re)
    assert np.array_equal(a.peak_val, b.peak_val)
    assert np.array_equal(a.mu_center, b.mu_center)
    assert np.array_equal(a.edge, b.edge)


def test_run_series_conservation_trace(hadamard):
    series = run_series(hadamard, 3, 150, g=LEFT)
    assert np.max(np.abs(series.sum_re - 1.0)) < 1e-10
    assert np.max(series.max_abs_im) <= 1e-12  # odd width: exactly real
    for edge in series.edges.values():
        assert np.all(edge <= series.ns)  # support edge inside the cone


def test_oracle_series_matches_wide_stripe(hadamard):
    n = 24
    wide = run_series(hadamard, 2 * n + 1, n, g=PLUS)
    oracle = oracle_series(hadamard, PLUS, n)
    assert np.allclose(wide.mu_center, oracle.mu_center, atol=1e-12)
    assert np.allclose(wide.sum_re, oracle.sum_re, atol=1e-12)
    mask = ~np.isnan(wide.peak_xbar)
    assert np.array_equal(mask, ~np.isnan(oracle.peak_xbar))
    assert np.allclose(wide.peak_xbar[mask], oracle.peak_xbar[mask], atol=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.1, max_value=10.0))
def test_exponent_fits_scale_invariant_hypothesis(c):
    ns = np.arange(1, 301)
    series = _synthetic_series(ns, c * ns ** (-0.5), c * ns ** (-0.5))
    assert abs(decay_exponent(series, "center", (50, 300)).slope + 0.5) < 1e-9
