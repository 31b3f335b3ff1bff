"""Discrete loops and paths on U(1) and SU(2).

Circle-valued data is carried as an unwrapped real lift together with an
integer winding number; SU(2) data as arrays of unit quaternions.  Paths
have sitting instants realized as exact sample equality on collars, which
keeps concatenation and fusion smooth on the grid without resampling.
"""

from dataclasses import dataclass

import numpy as np

from . import quat
from .errors import (
    EndpointMismatch,
    NotOrientationPreserving,
    ResolutionError,
)
from .numerics import (
    diff_periodic,
    diff_uniform,
    open_spline,
    periodic_spline,
    smoothstep_plateau,
)

ENDPOINT_TOL = 1e-9


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class RealLift:
    """Unwrapped lift f of a circle-valued loop t -> e^{2 pi i f(t)}.

    values[j] = f(j/N) with values[N] = values[0] + winding exactly.
    """

    values: np.ndarray
    winding: int

    @classmethod
    def from_values(cls, values):
        values = np.ascontiguousarray(values, dtype=float)
        if values.ndim != 1 or values.shape[0] < 8:
            raise ResolutionError("lift needs at least 8 samples")
        jumps = np.abs(np.diff(values))
        if np.any(jumps >= 0.5):
            raise ResolutionError("successive lift values jump by >= 1/2")
        winding = round(float(values[-1] - values[0]))
        if abs(values[-1] - values[0] - winding) > ENDPOINT_TOL:
            raise ResolutionError("lift endpoints do not differ by an integer")
        values = values.copy()
        values[-1] = values[0] + winding
        values.setflags(write=False)
        return cls(values, winding)

    @property
    def n(self):
        return self.values.shape[0] - 1

    def canonicalize(self):
        """Shift by an integer so that f(0) lies in [0, 1)."""
        shift = np.floor(self.values[0])
        if shift == 0.0:
            return self
        return RealLift.from_values(self.values - shift)

    def shifted(self, z):
        """Lift shifted by the integer z (deliberately leaves the gauge)."""
        return RealLift.from_values(self.values + float(z))

    def periodic_part(self):
        """Lift minus the winding ramp; a periodic sample set."""
        t = np.linspace(0.0, 1.0, self.values.shape[0])
        return self.values - self.winding * t


@dataclass(frozen=True)
class LoopU1:
    lift: RealLift

    @property
    def n(self):
        return self.lift.n

    @property
    def winding(self):
        return self.lift.winding

    def canonicalize(self):
        return LoopU1(self.lift.canonicalize())

    def angles(self):
        """Sample angles in turns, reduced mod 1."""
        return np.mod(self.lift.values, 1.0)


def _check_collar(values, collar, what):
    if collar < 1:
        raise ResolutionError(f"{what} collar must be >= 1 sample")
    head = values[: collar + 1]
    tail = values[-collar - 1 :]
    if np.ptp(head, axis=0).max() > 0 or np.ptp(tail, axis=0).max() > 0:
        raise ResolutionError(f"{what} is not constant on its collars")


@dataclass(frozen=True)
class PathU1:
    """Path in U(1) carried as a real lift on [0,1] with sitting instants."""

    values: np.ndarray
    collar: int

    @classmethod
    def from_values(cls, values, collar):
        values = np.ascontiguousarray(values, dtype=float)
        _check_collar(values, collar, "U(1) path")
        values.setflags(write=False)
        return cls(values, int(collar))

    @property
    def n(self):
        return self.values.shape[0] - 1

    def start(self):
        return self.values[0]

    def end(self):
        return self.values[-1]


@dataclass(frozen=True)
class LoopSU2:
    samples: np.ndarray  # (N+1, 4), samples[N] == samples[0]

    @classmethod
    def from_samples(cls, samples):
        samples = _validated_su2(samples)
        if np.max(np.abs(samples[-1] - samples[0])) > ENDPOINT_TOL:
            raise EndpointMismatch("loop samples do not close up")
        samples = samples.copy()
        samples[-1] = samples[0]
        samples.setflags(write=False)
        return cls(samples)

    @property
    def n(self):
        return self.samples.shape[0] - 1


@dataclass(frozen=True)
class PathSU2:
    samples: np.ndarray
    collar: int

    @classmethod
    def from_samples(cls, samples, collar):
        samples = _validated_su2(samples)
        _check_collar(samples, collar, "SU(2) path")
        samples.setflags(write=False)
        return cls(samples, int(collar))

    @property
    def n(self):
        return self.samples.shape[0] - 1

    def start(self):
        return self.samples[0]

    def end(self):
        return self.samples[-1]


def _validated_su2(samples):
    samples = np.ascontiguousarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 4:
        raise ResolutionError("SU(2) samples must be an (N+1, 4) array")
    norms = quat.qnorm(samples)
    if np.max(np.abs(norms - 1.0)) > 1e-12:
        raise ResolutionError("samples are not unit quaternions")
    steps = quat.geodesic_distance(samples[:-1], samples[1:])
    if np.max(steps) >= np.pi / 2:
        raise ResolutionError("adjacent samples further apart than pi/2")
    return samples


@dataclass(frozen=True)
class SmoothingMap:
    """Monotone map [0,1] -> [0,1], locally constant near the endpoints."""

    values: np.ndarray
    collar: int

    @classmethod
    def from_values(cls, values, collar):
        values = np.ascontiguousarray(values, dtype=float)
        if values[0] != 0.0 or values[-1] != 1.0:
            raise ResolutionError("smoothing map must fix 0 and 1")
        if np.any(np.diff(values) < 0.0):
            raise ResolutionError("smoothing map must be nondecreasing")
        _check_collar(values, collar, "smoothing map")
        values.setflags(write=False)
        return cls(values, int(collar))

    @property
    def n(self):
        return self.values.shape[0] - 1


def default_smoothing(n=256, collar=None):
    if collar is None:
        collar = n // 16
    t = np.linspace(0.0, 1.0, n + 1)
    lo, hi = collar / n, 1.0 - collar / n
    vals = smoothstep_plateau(t, lo, hi)
    vals[0], vals[-1] = 0.0, 1.0
    return SmoothingMap.from_values(vals, collar)


@dataclass(frozen=True)
class Homotopy:
    """Sampled homotopy h(t_i, z_j) of loops or paths in U(1) or SU(2).

    For U(1) the grid stores real lifts; for SU(2) unit quaternions with a
    trailing axis of length 4.  `periodic_z` marks loop homotopies.
    """

    group: str
    grid: np.ndarray
    periodic_z: bool = True

    @property
    def shape(self):
        return self.grid.shape[:2]


# ---------------------------------------------------------------------------
# operations


def unwrap(raw_angles):
    """Build a RealLift (canonical gauge) from raw angles in turns."""
    raw = np.asarray(raw_angles, dtype=float)
    d = np.diff(raw)
    steps = d - np.round(d)
    if np.any(np.abs(steps) >= 0.5 - 1e-12):
        raise ResolutionError("successive angles jump by >= 1/2 turn")
    values = np.empty_like(raw)
    values[0] = raw[0] - np.floor(raw[0])
    values[1:] = values[0] + np.cumsum(steps)
    closure = values[-1] - values[0]
    if abs(closure - round(closure)) > 1e-9:
        raise ResolutionError("angles do not close up to a loop")
    return RealLift.from_values(values)


def winding_number(tau):
    return tau.lift.winding


def average_lift(lift):
    """Integral of the lift over [0,1]; trapezoid, spectral on the periodic part."""
    n = lift.n
    return float(np.trapezoid(lift.values, dx=1.0 / n))


def _align_u1(a_end, b_start, tol):
    shift = a_end - b_start
    if abs(shift - round(shift)) > tol:
        raise EndpointMismatch("U(1) path endpoints differ beyond tolerance")
    return shift


def concat(p1, p2, tol=ENDPOINT_TOL):
    """Concatenated path: p1 on [0,1/2], p2 on [1/2,1]; exact subsampling."""
    n = p1.n
    if p2.n != n or n % 2:
        raise ResolutionError("concat needs matching even sample counts")
    if isinstance(p1, PathU1):
        shift = _align_u1(p1.end(), p2.start(), tol)
        out = np.empty(n + 1)
        out[: n // 2 + 1] = p1.values[::2]
        out[n // 2 :] = p2.values[::2] + shift
        return PathU1.from_values(out, max(1, p1.collar // 2))
    if np.max(np.abs(p1.end() - p2.start())) > 1e-6:
        raise EndpointMismatch("SU(2) path endpoints differ beyond tolerance")
    out = np.empty((n + 1, 4))
    out[: n // 2 + 1] = p1.samples[::2]
    out[n // 2 :] = p2.samples[::2]
    out[n // 2] = p1.samples[-1]
    return PathSU2.from_samples(out, max(1, p1.collar // 2))


def reverse(p):
    if isinstance(p, PathU1):
        return PathU1.from_values(p.values[::-1].copy(), p.collar)
    return PathSU2.from_samples(p.samples[::-1].copy(), p.collar)


def fuse(p1, p2, tol=ENDPOINT_TOL):
    """Loop running through p1 on [0,1/2] and reversed p2 on [1/2,1]."""
    n = p1.n
    if p2.n != n or n % 2:
        raise ResolutionError("fuse needs matching even sample counts")
    if isinstance(p1, PathU1):
        shift = _align_u1(p1.end(), p2.end(), tol)
        _align_u1(p1.start(), p2.start(), tol)
        out = np.empty(n + 1)
        out[: n // 2 + 1] = p1.values[::2]
        out[n // 2 :] = p2.values[::-2] + shift
        w = round(out[-1] - out[0])
        mc = max(1, p2.collar // 2)
        out[-mc - 1 :] = out[0] + w
        return LoopU1(RealLift.from_values(out))
    if (
        np.max(np.abs(p1.end() - p2.end())) > 1e-6
        or np.max(np.abs(p1.start() - p2.start())) > 1e-6
    ):
        raise EndpointMismatch("fuse requires common endpoints")
    out = np.empty((n + 1, 4))
    out[: n // 2 + 1] = p1.samples[::2]
    out[n // 2 :] = p2.samples[::-2]
    out[n // 2] = p1.samples[-1]
    out[-1] = out[0] = p1.samples[0]
    return LoopSU2.from_samples(out)


def flat_loop(p):
    """The flat loop over a path: fuse(p, p)."""
    return fuse(p, p)


def retraction(p, phi, t):
    """Path retraction s -> p(t * phi(s))."""
    u = t * phi.values
    if isinstance(p, PathU1):
        spline = open_spline(p.values)
        return PathU1.from_values(spline(u), phi.collar)
    spline = open_spline(p.samples)
    vals = quat.qnormalize(spline(u))
    return PathSU2.from_samples(vals, phi.collar)


def rotate(tau, theta):
    """Pre-composition of a loop with the rotation by theta turns."""
    n = tau.n
    k = theta * n
    if isinstance(tau, LoopU1):
        lift = tau.lift
        if abs(k - round(k)) < 1e-12:  # grid rotation: exact roll
            k = int(round(k)) % n
            rolled = np.roll(lift.periodic_part()[:-1], -k)
            t = np.linspace(0.0, 1.0, n + 1)
            vals = np.concatenate([rolled, rolled[:1]]) + lift.winding * (t + theta)
            return LoopU1(RealLift.from_values(vals))
        spline = periodic_spline(lift.periodic_part())
        t = np.linspace(0.0, 1.0, n + 1)
        vals = spline(np.mod(t + theta, 1.0)) + lift.winding * (t + theta)
        return LoopU1(RealLift.from_values(vals))
    if abs(k - round(k)) < 1e-12:
        k = int(round(k)) % n
        body = np.roll(tau.samples[:-1], -k, axis=0)
        return LoopSU2.from_samples(np.concatenate([body, body[:1]], axis=0))
    spline = periodic_spline(tau.samples)
    t = np.linspace(0.0, 1.0, n + 1)
    vals = quat.qnormalize(spline(np.mod(t + theta, 1.0)))
    vals[-1] = vals[0]
    return LoopSU2.from_samples(vals)


def reparameterize(tau, phi_lift):
    """Pre-composition with an orientation-preserving circle diffeomorphism.

    `phi_lift` is an (N+1,) lift with phi[N] = phi[0] + 1, strictly increasing.
    """
    phi_lift = np.asarray(phi_lift, dtype=float)
    if abs(phi_lift[-1] - phi_lift[0] - 1.0) > 1e-9 or np.any(np.diff(phi_lift) <= 0):
        raise NotOrientationPreserving("need a strictly increasing degree-1 lift")
    if isinstance(tau, LoopU1):
        lift = tau.lift
        spline = periodic_spline(lift.periodic_part())
        vals = spline(np.mod(phi_lift, 1.0)) + lift.winding * phi_lift
        return LoopU1(RealLift.from_values(vals))
    spline = periodic_spline(tau.samples)
    vals = quat.qnormalize(spline(np.mod(phi_lift, 1.0)))
    vals[-1] = vals[0]
    return LoopSU2.from_samples(vals)


def _homotopy_singular_values(h):
    grid = h.grid
    if grid.shape[0] < 7 or grid.shape[1] < 8:
        raise ResolutionError("homotopy grid too coarse for rank diagnostics")
    dt = diff_uniform(grid, axis=0)
    if h.periodic_z:
        body = grid[:, :-1]
        dz = diff_periodic(body, axis=1)
        dz = np.concatenate([dz, dz[:, :1]], axis=1)
    else:
        dz = diff_uniform(grid, axis=1)
    xi_t = quat.left_trivialize(grid, dt)
    xi_z = quat.left_trivialize(grid, dz)
    jac = np.stack([xi_t, xi_z], axis=-1)  # (T+1, N+1, 3, 2)
    return np.linalg.svd(jac, compute_uv=False)


def rank_defect(h):
    """Largest second singular value of the sampled homotopy differential.

    Tangents are taken in left-trivialized coordinates; for U(1) targets the
    differential has at most rank one, so the defect is zero by definition.
    """
    if h.group == "U1":
        return 0.0
    return float(np.max(_homotopy_singular_values(h)[..., 1]))


def is_thin(h, tol_factor=1e-3):
    """Thinness at the discrete level: sigma_2 small against the leading scale.

    Finite differences leave a floor of roughly 1e-5 on curvy data at the
    default grids, while genuinely rank-two homotopies measure 0.1 and
    above, so the relative gate separates by two orders each way.
    """
    if h.group == "U1":
        return True
    sing = _homotopy_singular_values(h)
    scale = max(1.0, float(np.max(sing[..., 0])))
    return float(np.max(sing[..., 1])) < tol_factor * scale


# ---------------------------------------------------------------------------
# constructors used throughout the audits


def grid(n):
    return np.linspace(0.0, 1.0, n + 1)


def constant_path_u1(c, n=256, collar=None):
    collar = n // 16 if collar is None else collar
    return PathU1.from_values(np.full(n + 1, float(c)), collar)


def constant_loop_u1(c, n=256):
    t = np.zeros(n + 1)
    return LoopU1(RealLift.from_values(t + (c - np.floor(c))))


def constant_path_su2(q, n=256, collar=None):
    collar = n // 16 if collar is None else collar
    return PathSU2.from_samples(np.tile(np.asarray(q, dtype=float), (n + 1, 1)), collar)


def constant_loop_su2(q, n=256):
    return LoopSU2.from_samples(np.tile(np.asarray(q, dtype=float), (n + 1, 1)))


def loop_to_path(tau, collar=None):
    """Reads a based loop as a path with sitting instants (collar required)."""
    n = tau.n
    collar = n // 16 if collar is None else collar
    if isinstance(tau, LoopU1):
        return PathU1.from_values(tau.lift.values.copy(), collar)
    return PathSU2.from_samples(tau.samples.copy(), collar)
