"""Unit-quaternion arithmetic, vectorized over leading axes.

Quaternions are stored as (..., 4) float arrays in (w, x, y, z) order.
Pure-imaginary quaternions (Lie algebra elements) are stored as (..., 3)
arrays holding the (x, y, z) part.
"""

import numpy as np

from .errors import AntipodeError

ONE = np.array([1.0, 0.0, 0.0, 0.0])


def qmul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    w1, v1 = a[..., :1], a[..., 1:]
    w2, v2 = b[..., :1], b[..., 1:]
    w = w1 * w2 - np.sum(v1 * v2, axis=-1, keepdims=True)
    v = w1 * v2 + w2 * v1 + np.cross(v1, v2)
    return np.concatenate([w, v], axis=-1)


def qconj(q):
    q = np.asarray(q)
    out = q.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm(q):
    return np.linalg.norm(q, axis=-1)


def qnormalize(q):
    q = np.asarray(q, dtype=float)
    return q / qnorm(q)[..., None]


def qexp(v):
    """Exponential of a pure-imaginary quaternion given as (..., 3)."""
    v = np.asarray(v, dtype=float)
    a = np.linalg.norm(v, axis=-1)
    # sin(a)/a via np.sinc, stable at a = 0
    s = np.sinc(a / np.pi)
    out = np.empty(v.shape[:-1] + (4,))
    out[..., 0] = np.cos(a)
    out[..., 1:] = s[..., None] * v
    return out


def qlog(q, margin=0.0):
    """Logarithm of a unit quaternion, returned as (..., 3).

    Principal branch; undefined at -1.  With margin > 0 raises
    AntipodeError when any input is within that chordal distance of -1.
    """
    q = np.asarray(q, dtype=float)
    if margin > 0.0:
        d = np.linalg.norm(q - np.array([-1.0, 0.0, 0.0, 0.0]), axis=-1)
        if np.any(d < margin):
            raise AntipodeError(f"point within {margin} of the antipode")
    vn = np.linalg.norm(q[..., 1:], axis=-1)
    a = np.arctan2(vn, q[..., 0])  # well-conditioned at both poles
    scale = np.where(vn > 1e-14, a / np.where(vn > 1e-14, vn, 1.0), 1.0)
    return scale[..., None] * q[..., 1:]


def dqexp(v, dv):
    """Derivative of qexp along a curve: d/dt qexp(v(t)) given v, v'.

    Differentiates the closed form (cos a, sinc(a) v) analytically, so no
    finite differencing enters.  Returns (..., 4) ambient vectors.
    """
    v = np.asarray(v, dtype=float)
    dv = np.asarray(dv, dtype=float)
    a = np.linalg.norm(v, axis=-1)
    da_num = np.sum(v * dv, axis=-1)
    s = np.sinc(a / np.pi)                       # sin a / a
    # derivative of sinc: (a cos a - sin a)/a^2, with a*da = v.dv
    with np.errstate(invalid="ignore", divide="ignore"):
        c1 = np.where(a > 1e-8, (np.cos(a) - s) / np.where(a > 1e-8, a * a, 1.0), -1.0 / 3.0)
    out = np.empty(v.shape[:-1] + (4,))
    out[..., 0] = -s * da_num
    out[..., 1:] = s[..., None] * dv + c1[..., None] * da_num[..., None] * v
    return out


def left_trivialize(q, dq):
    """Imaginary part of q^{-1} dq for an ambient tangent dq at unit q."""
    return qmul(qconj(q), dq)[..., 1:]


def ad(q, xi):
    """Adjoint action q xi q^{-1} on algebra elements xi (..., 3)."""
    q = np.asarray(q)
    w, u = q[..., :1], q[..., 1:]
    # q (0,xi) q^- for unit q: w^2 xi + 2w u x xi + (u.xi) u + u x (u x xi)
    cross1 = np.cross(u, xi)
    return (
        (w * w) * xi
        + 2.0 * w * cross1
        + np.sum(u * xi, axis=-1, keepdims=True) * u
        + np.cross(u, cross1)
    )


def geodesic_distance(a, b):
    """Angle between unit quaternions (Riemannian distance on S^3)."""
    d = np.clip(np.abs(np.sum(np.asarray(a) * np.asarray(b), axis=-1)), 0.0, 1.0)
    return 2.0 * np.arccos(d)


def random_unit(rng, shape=()):
    q = rng.standard_normal(shape + (4,))
    return qnormalize(q)
