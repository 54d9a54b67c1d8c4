"""Trigonometric interpolation helpers for periodic samples (axis 0 is the period)."""
import logging
import math

import numpy as np
from scipy import fft, signal

logger = logging.getLogger(__name__)

# Complex phase entries per evaluation block
EVAL_BLOCK = 1 << 18


def wavenumbers(n, period):
    """Angular wavenumbers of the rfft bins for n samples over one period."""
    return 2.0 * math.pi / period * np.arange(n // 2 + 1)


def fourier_derivative(samples, period, order=1):
    """
    Spectral derivative of periodic samples.

    Args:
        samples: array of shape (n, ...), uniformly spaced over one period
        period: length of the period
        order: derivative order

    Returns:
        Array of the same shape holding the derivative at the samples
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0]
    k = wavenumbers(n, period).reshape((-1,) + (1,) * (samples.ndim - 1))
    coeffs = fft.rfft(samples, axis=0) * (1j * k) ** order
    if n % 2 == 0 and order % 2 == 1:
        coeffs[n // 2] = 0.0
    return fft.irfft(coeffs, n=n, axis=0)


def fourier_resample(samples, n):
    """Band-limited resampling of one period to n uniform samples."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] == n:
        return samples.copy()
    return signal.resample(samples, n, axis=0)


def fourier_evaluate(samples, period, s, order=0):
    """
    Evaluate the trigonometric interpolant of periodic samples (or its
    derivative) at arbitrary parameters s.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.shape[0]
    s = np.atleast_1d(np.asarray(s, dtype=float))
    k = wavenumbers(n, period)
    coeffs = fft.rfft(samples, axis=0) / n
    weights = np.full(k.shape, 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        # Nyquist mode: cosine only, dropped from odd derivatives
        weights[-1] = 1.0 if order % 2 == 0 else 0.0
    factor = (weights * (1j * k) ** order).reshape((-1,) + (1,) * (samples.ndim - 1))
    flat = (coeffs * factor).reshape(k.size, -1)
    step = max(1, EVAL_BLOCK // k.size)
    values = np.empty((s.size, flat.shape[1]))
    for lo in range(0, s.size, step):
        phases = np.exp(1j * np.outer(s[lo:lo + step], k))
        values[lo:lo + step] = np.real(phases @ flat)
    return values.reshape((s.size,) + samples.shape[1:])


def fourier_antiderivative(values, period):
    """
    Antiderivative of periodic samples, F(0) = 0. Returns (F at samples, mean),
    where F(s) = mean·s + periodic part.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    coeffs = fft.rfft(values, axis=0)
    mean = np.real(coeffs[0]) / n
    k = wavenumbers(n, period)
    k[0] = 1.0
    periodic = coeffs / (1j * k)
    periodic[0] = 0.0
    if n % 2 == 0:
        periodic[n // 2] = 0.0
    part = fft.irfft(periodic, n=n, axis=0)
    s = np.arange(n) * period / n
    return mean * s + part - part[0], mean
