"""Spectral utilities for smooth periodic grid functions.

Everything downstream (curve geometry, profile functions, quadrature) works with
uniformly sampled periodic functions; this module wraps the rfft bookkeeping:
trigonometric interpolation at arbitrary points, spectral differentiation,
antiderivatives, and periodic-trapezoid integrals.
"""

from __future__ import annotations

import numpy as np


def trapezoid_period(values, period):
    """Integral over one period of a uniformly sampled periodic function.

    For smooth periodic integrands the periodic trapezoid rule (= rectangle rule)
    is spectrally accurate.
    """
    values = np.asarray(values)
    n = values.shape[-1]
    return values.sum(axis=-1) * (period / n)


def spectral_derivative(values, period, order=1):
    """Differentiate uniform periodic samples via FFT."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    k = np.fft.rfftfreq(n, d=period / (2.0 * np.pi * n))  # integer wavenumbers * (2pi/period)
    coef = np.fft.rfft(values)
    coef = coef * (1j * k) ** order
    if n % 2 == 0 and order % 2 == 1:
        coef[..., -1] = 0.0  # Nyquist mode has no well-defined odd derivative
    return np.fft.irfft(coef, n=n)


class PeriodicStack:
    """A bank of real periodic functions sharing one Fourier grid.

    Stores rfft coefficients of m functions sampled on n uniform points over
    [0, L) and evaluates all of them at arbitrary points with a single phase
    matrix.  Coefficient columns whose magnitude is negligible across all rows
    are dropped, which keeps pointwise evaluation cheap for smooth data.
    """

    def __init__(self, samples, period, names=None, tol=1e-15):
        samples = np.atleast_2d(np.asarray(samples, dtype=float))
        self.period = float(period)
        self.n_samples = samples.shape[1]
        n = self.n_samples
        coef = np.fft.rfft(samples, axis=1) / n
        # real-signal evaluation weights: c0 + 2*Re sum_{k>=1} c_k e^{ikwx}
        # (Nyquist column kept with weight 1, it is ~0 for resolved data)
        weights = np.full(coef.shape[1], 2.0)
        weights[0] = 1.0
        if n % 2 == 0:
            weights[-1] = 1.0
        self._full_coef = coef
        scale = np.abs(coef).max() + 1e-300
        keep = np.nonzero(np.abs(coef).max(axis=0) > tol * scale)[0]
        if keep.size == 0:
            keep = np.array([0])
        self.k = keep  # integer mode numbers
        self.coef = coef[:, keep] * weights[keep]
        self.omega = 2.0 * np.pi / self.period
        self.names = list(names) if names is not None else None

    @property
    def n_funcs(self):
        return self.coef.shape[0]

    def __call__(self, x):
        """Evaluate all functions at x; returns shape (m,) + shape(x)."""
        x = np.asarray(x, dtype=float)
        phase = np.exp((1j * self.omega) * np.multiply.outer(self.k, x))
        return np.real(np.tensordot(self.coef, phase, axes=(1, 0)))

    def eval_single(self, row, x):
        x = np.asarray(x, dtype=float)
        phase = np.exp((1j * self.omega) * np.multiply.outer(self.k, x))
        return np.real(np.tensordot(self.coef[row], phase, axes=(0, 0)))

    def derivative_stack(self, order=1):
        vals = np.stack([
            spectral_derivative(np.fft.irfft(self._full_coef[i] * self.n_samples,
                                             n=self.n_samples), self.period, order)
            for i in range(self._full_coef.shape[0])
        ])
        return PeriodicStack(vals, self.period)


class PeriodicFunction:
    """Single real periodic function built from uniform samples."""

    def __init__(self, samples, period, tol=1e-15, derivative_samples=None):
        self.samples = np.asarray(samples, dtype=float)
        self.period = float(period)
        self._stack = PeriodicStack(self.samples[None, :], period, tol=tol)
        # optional exact derivative samples (e.g. compactly supported data,
        # where spectral differentiation leaks outside the support)
        self._derivative_samples = derivative_samples

    def __call__(self, x):
        out = self._stack(x)
        return out[0]

    def derivative(self, order=1):
        if self._derivative_samples is not None and order == 1:
            return PeriodicFunction(self._derivative_samples, self.period)
        return PeriodicFunction(
            spectral_derivative(self.samples, self.period, order), self.period)

    @property
    def mean(self):
        return float(self.samples.mean())

    def antiderivative(self):
        """Return (mean, F) with d/dx F = f - mean and F(0) = 0."""
        n = self.samples.size
        coef = np.fft.rfft(self.samples)
        k = np.arange(coef.size)
        w = 2.0 * np.pi / self.period
        with np.errstate(divide="ignore", invalid="ignore"):
            anti = coef / (1j * w * k)
        anti[0] = 0.0
        if n % 2 == 0:
            anti[-1] = 0.0
        vals = np.fft.irfft(anti, n=n)
        vals -= vals[0]
        return self.mean, PeriodicFunction(vals, self.period)

    def integral(self):
        return trapezoid_period(self.samples, self.period)
