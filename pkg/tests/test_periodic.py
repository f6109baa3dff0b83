"""Spectral utilities: quadrature, differentiation, interpolation."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from beltramilab.periodic import (PeriodicFunction, PeriodicStack,
                                  spectral_derivative, trapezoid_period)


def _trig(coeffs, L, x):
    """Direct evaluation of sum a_k cos + b_k sin with wavenumber 2 pi k / L."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    w = 2.0 * np.pi / L
    for k, (a, b) in enumerate(coeffs):
        out += a * np.cos(k * w * x) + b * np.sin(k * w * x)
    return out


def test_trapezoid_exact_for_trig_polynomials():
    L = 3.7
    x = L * np.arange(64) / 64
    f = 2.0 + np.cos(2 * np.pi * 5 * x / L) - 0.3 * np.sin(2 * np.pi * 9 * x / L)
    assert abs(trapezoid_period(f, L) - 2.0 * L) < 1e-13 * L


def test_spectral_derivative_matches_exact():
    L = 2.0 * np.pi * 1.3
    n = 256
    x = L * np.arange(n) / n
    w = 2.0 * np.pi / L
    f = np.sin(3 * w * x) + 0.5 * np.cos(7 * w * x)
    df = 3 * w * np.cos(3 * w * x) - 3.5 * w * np.sin(7 * w * x)
    assert np.abs(spectral_derivative(f, L) - df).max() < 1e-11


def test_second_derivative():
    L = 5.0
    n = 128
    x = L * np.arange(n) / n
    w = 2.0 * np.pi / L
    f = np.cos(4 * w * x)
    d2 = -(4 * w) ** 2 * np.cos(4 * w * x)
    assert np.abs(spectral_derivative(f, L, order=2) - d2).max() < 1e-9


@settings(deadline=None, max_examples=25)
@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)),
                min_size=1, max_size=8),
       st.floats(0.5, 20.0))
def test_stack_interpolates_trig_polynomials(coeffs, L):
    n = 64
    x = L * np.arange(n) / n
    samples = _trig(coeffs, L, x)
    fn = PeriodicFunction(samples, L)
    probe = np.linspace(0.0, 3.0 * L, 17)
    scale = np.abs(samples).max() + 1.0
    assert np.abs(fn(probe) - _trig(coeffs, L, probe)).max() < 1e-10 * scale


def test_antiderivative_contract():
    L = 4.0
    n = 256
    x = L * np.arange(n) / n
    w = 2.0 * np.pi / L
    f = 1.5 + np.sin(2 * w * x)
    mean, F = PeriodicFunction(f, L).antiderivative()
    assert abs(mean - 1.5) < 1e-13
    assert abs(F(0.0)) < 1e-13
    # d/dx F = f - mean
    dF = F.derivative()
    assert np.abs(dF.samples - (f - mean)).max() < 1e-10


def test_exact_derivative_samples_override():
    L = 1.0
    n = 128
    x = L * np.arange(n) / n
    f = np.cos(2 * np.pi * x)
    df_exact = -2.0 * np.pi * np.sin(2 * np.pi * x)
    fn = PeriodicFunction(f, L, derivative_samples=df_exact)
    assert np.shares_memory(fn.derivative().samples, df_exact) or \
        np.array_equal(fn.derivative().samples, df_exact)


def test_stack_batched_evaluation_matches_rows(rng):
    L = 2.0
    n = 64
    x = L * np.arange(n) / n
    rows = np.vstack([np.cos(2 * np.pi * k * x / L) for k in (1, 3, 5)])
    stack = PeriodicStack(rows, L)
    probe = rng.uniform(0, L, 11)
    vals = stack(probe)
    for i, k in enumerate((1, 3, 5)):
        assert np.abs(vals[i] - np.cos(2 * np.pi * k * probe / L)).max() < 1e-12
        assert np.abs(stack.eval_single(i, probe)
                      - np.cos(2 * np.pi * k * probe / L)).max() < 1e-12
