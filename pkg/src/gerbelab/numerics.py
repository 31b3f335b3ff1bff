"""Finite differences, quadrature weights and interpolation helpers.

Sampled data lives on uniform grids; derivative estimates use 4th-order
stencils so that rank diagnostics and pullback integrals stay well below
the package's tolerance ladder (1e-3 single quadrature, 5e-3 composite).
"""

import numpy as np
from scipy.interpolate import CubicSpline


def diff_periodic(values, axis=0, period=1.0):
    """4th-order central difference of samples of a periodic function.

    `values` holds one period without the duplicated endpoint; spacing is
    period / n along `axis`.
    """
    v = np.asarray(values, dtype=float)
    n = v.shape[axis]
    h = period / n
    r = lambda k: np.roll(v, -k, axis=axis)
    return (-r(2) + 8.0 * r(1) - 8.0 * r(-1) + r(-2)) / (12.0 * h)


def diff_uniform(values, axis=0, length=1.0):
    """4th-order differences of samples on [0, length], one-sided at edges."""
    v = np.asarray(values, dtype=float)
    v = np.moveaxis(v, axis, 0)
    n = v.shape[0]
    if n < 7:
        raise ValueError("need at least 7 samples for 4th-order differences")
    h = length / (n - 1)
    out = np.empty_like(v)
    out[2:-2] = (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * h)
    # 4th-order one-sided stencils for the two rows at each end
    c0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    c1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0
    out[0] = np.tensordot(c0, v[:5], axes=(0, 0)) / h
    out[1] = np.tensordot(c1, v[:5], axes=(0, 0)) / h
    out[-1] = -np.tensordot(c0, v[-5:][::-1], axes=(0, 0)) / h
    out[-2] = -np.tensordot(c1, v[-5:][::-1], axes=(0, 0)) / h
    return np.moveaxis(out, 0, axis)


def spectral_diff_periodic(values, period=1.0):
    """Spectral derivative of one period of samples (no duplicated endpoint)."""
    v = np.asarray(values, dtype=float)
    n = v.shape[0]
    k = np.fft.rfftfreq(n, d=period / n)
    vhat = np.fft.rfft(v, axis=0)
    shape = (-1,) + (1,) * (v.ndim - 1)
    dhat = vhat * (2j * np.pi * k).reshape(shape)
    if n % 2 == 0:
        dhat[-1] = 0.0  # Nyquist mode has no odd derivative representation
    return np.fft.irfft(dhat, n=n, axis=0)


def trapezoid_weights(n_points, length=1.0):
    w = np.full(n_points, length / (n_points - 1))
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def periodic_mean(values, axis=0):
    """Mean of one period of samples; spectrally accurate for smooth data."""
    return np.mean(values, axis=axis)


def gauss_legendre_01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def fourier_eval_periodic(values, points):
    """Trigonometric interpolation of periodic samples at arbitrary points.

    `values` has the duplicated endpoint (shape (N+1, ...)); `points` are
    in units of the period 1.  Spectrally accurate and C-infinity, unlike a
    cubic spline, so derivative diagnostics of composed data stay clean.
    """
    body = np.asarray(values, dtype=float)[:-1]
    n = body.shape[0]
    coeff = np.fft.rfft(body, axis=0) / n
    k = np.arange(coeff.shape[0])
    pts = np.asarray(points, dtype=float).ravel()
    phases = np.exp(2j * np.pi * np.outer(pts, k))
    weights = np.ones_like(k, dtype=float) * 2.0
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0
    flat = coeff.reshape(coeff.shape[0], -1)
    out = (phases * weights[None, :]) @ flat
    out = out.real.reshape(pts.shape + body.shape[1:])
    return out.reshape(np.asarray(points).shape + body.shape[1:])


def periodic_spline(values, period=1.0):
    """Cubic spline through one full period including duplicated endpoint.

    `values[-1]` must equal `values[0]` componentwise.
    """
    n = values.shape[0] - 1
    x = np.linspace(0.0, period, n + 1)
    return CubicSpline(x, values, axis=0, bc_type="periodic")


def open_spline(values, length=1.0):
    x = np.linspace(0.0, length, values.shape[0])
    return CubicSpline(x, values, axis=0)


def smoothstep_plateau(t, lo, hi):
    """C-infinity ramp: 0 for t <= lo, 1 for t >= hi."""
    t = np.asarray(t, dtype=float)
    u = np.clip((t - lo) / (hi - lo), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(u > 0.0, np.exp(-1.0 / np.where(u > 0.0, u, 1.0)), 0.0)
        b = np.where(u < 1.0, np.exp(-1.0 / np.where(u < 1.0, 1.0 - u, 1.0)), 0.0)
    return a / (a + b)


def plateau_ramp(t, lo, hi):
    """Quintic ramp with exact plateaus: 0 below lo, 1 above hi; C^2 joins.

    Much tamer high derivatives than the exponential step, which matters
    for finite-difference diagnostics applied to composed data.
    """
    t = np.asarray(t, dtype=float)
    u = np.clip((t - lo) / (hi - lo), 0.0, 1.0)
    return u**3 * (10.0 + u * (-15.0 + 6.0 * u))
