"""The Mickelsson model of the universal central extension of LSU(2).

Elements are pairs (disk map, phase) modulo the equivalence that shifts the
phase by the Wess-Zumino action of the glued sphere.  All operations reduce
to phases computed from sphere assemblies; comparisons between elements over
the same boundary loop go through `equivalence_defect`, the gauge-free way
to compare representatives of a quotient.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from . import quat
from .errors import BoundaryMismatch, NotThin, StepTooLarge, SupportOverlap
from .loopcore import Homotopy, LoopSU2, is_thin
from .numerics import fourier_eval_periodic, open_spline, plateau_ramp
from .su2geom import (
    DiskMap,
    cylinder_sphere,
    disk_from_transport,
    glue_sphere,
    pw_disk_integral,
    pw_sphere_integral,
    trisect_sphere,
    wz_action,
)

TWO_PI_I = 2j * cmath.pi


@dataclass(frozen=True)
class MickElement:
    phi: DiskMap
    z: complex

    def __post_init__(self):
        if abs(abs(self.z) - 1.0) > 1e-12:
            raise ValueError("phase must be a unit complex number")


def boundary(e):
    return e.phi.boundary()


def _check_same_boundary(d1, d2, tol=1e-8):
    if d1.m != d2.m:
        raise BoundaryMismatch("disk angular grids differ")
    if np.max(np.abs(d1.grid[-1] - d2.grid[-1])) > tol:
        raise BoundaryMismatch("elements do not sit over the same loop")


def equivalence_defect(e1, e2, cal):
    """z1 / (z2 exp(2 pi i S(glue(phi1, phi2)))); equals 1 iff equivalent."""
    _check_same_boundary(e1.phi, e2.phi)
    s = wz_action(glue_sphere(e1.phi, e2.phi), cal)
    return e1.z / (e2.z * cmath.exp(TWO_PI_I * s))


def product(e1, e2, cal):
    """Group law: pointwise disk product with the 2-form phase correction."""
    corr = pw_disk_integral(e1.phi, e2.phi, cal)
    return MickElement(
        e1.phi.pointwise_product(e2.phi),
        e1.z * e2.z * cmath.exp(-TWO_PI_I * corr),
    )


def fusion(e12, e23, phi13, cal, refine=1):
    """Fusion of elements over a path triple onto a chosen third disk.

    The trisected sphere is spline-refined once by default; its seams sit
    between grid columns and cost half an order of accuracy otherwise.
    """
    psi = trisect_sphere(e12.phi, e23.phi, phi13)
    if refine:
        psi = psi.refined(2)
    s = wz_action(psi, cal)
    return MickElement(phi13, e12.z * e23.z * cmath.exp(-TWO_PI_I * s))


def parallel_transport(e0, h, phi1, cal, tol=1e-8):
    """Transport along any homotopy of loops; phase from the cylinder sphere."""
    s = wz_action(cylinder_sphere(e0.phi, phi1, h, tol=tol), cal)
    return MickElement(phi1, e0.z * cmath.exp(TWO_PI_I * s))


def thin_transport(e0, h, phi1, cal, tol=1e-8):
    """Transport along a thin homotopy; same formula, thinness enforced."""
    if not is_thin(h):
        raise NotThin("homotopy has rank defect above tolerance")
    return parallel_transport(e0, h, phi1, cal, tol=tol)


def rotate_action(e, theta):
    """Circle action by rotation: the disk rotates, the phase is untouched."""
    return MickElement(e.phi.rotated(theta), e.z)


def thin_disk(path, r_count=128, collar=0.125):
    """Rank-one filling of the flat loop over a path.

    The filling factors through the signed horizontal coordinate of the
    disk, so its image is the path's image and every sphere assembled from
    copies of it has vanishing Wess-Zumino action.
    """
    m = path.n
    r = np.linspace(0.0, 1.0, r_count + 1)
    w = plateau_ramp(r, 0.0, 1.0 - collar)
    theta = 2.0 * np.pi * np.arange(m) / m
    u = np.arccos(np.clip(w[:, None] * np.cos(theta)[None, :], -1.0, 1.0)) / np.pi
    spline = open_spline(path.samples)
    grid = quat.qnormalize(spline(u))
    return DiskMap.from_grid(grid, collar)


def canonical_section(path, r_count=128, collar=0.125):
    """The fusion-neutral section over a path: thin filling with phase one."""
    return MickElement(thin_disk(path, r_count, collar), 1.0 + 0.0j)


def commutator_defect(p1, p2, supports, cal, off_support_tol=1e-10):
    """Phase between the two products of elements over disjointly supported loops.

    `supports` are the two declared open intervals in [0,1); off each
    support the corresponding boundary loop must equal the unit.
    """
    (lo1, hi1), (lo2, hi2) = supports
    if not (hi1 <= lo2 or hi2 <= lo1):
        raise SupportOverlap("declared supports overlap")
    for e, (lo, hi) in ((p1, (lo1, hi1)), (p2, (lo2, hi2))):
        rim = e.phi.grid[-1]
        m = rim.shape[0]
        z = np.arange(m) / m
        off = (z <= lo) | (z >= hi)
        dev = np.max(np.abs(rim[off] - quat.ONE))
        if dev > off_support_tol:
            raise SupportOverlap(
                f"loop deviates from the unit off its support by {dev:.2e}"
            )
    ab = product(p1, p2, cal)
    ba = product(p2, p1, cal)
    return equivalence_defect(ab, ba, cal)


def splitting_central_component(f_samples, xi0, cal, step=0.2, r_count=64, t_rows=17):
    """Derivative at zero of the transport phase along exp(t f(.) xi0),
    measured against the rotation-covariant reference disk family.

    Returns the rate in turns per unit t.  Raises StepTooLarge when halving
    the step moves the estimate by more than ten percent.
    """
    f_samples = np.asarray(f_samples, dtype=float)
    m = f_samples.shape[0] - 1
    if abs(f_samples[-1] - f_samples[0]) > 1e-12:
        raise ValueError("angular profile must be periodic")
    xi0 = np.asarray(xi0, dtype=float)

    base = DiskMap.from_grid(np.tile(quat.ONE, (r_count + 1, m, 1)), 0.125)
    prof = plateau_ramp(np.linspace(0.0, 1.0, r_count + 1), 0.0, 0.875)

    def reference_disk(t):
        amp = t * prof[:, None] * f_samples[None, :m]
        return DiskMap.from_grid(quat.qexp(amp[..., None] * xi0), 0.125)

    def transport_phase(t):
        # the generating homotopy factors through s*t*f(z): rank one exactly
        s_nodes = np.linspace(0.0, 1.0, t_rows)
        rows = quat.qexp((t * s_nodes[:, None] * f_samples[None, :])[..., None] * xi0)
        h = Homotopy("SU2", rows, periodic_z=True)
        return wz_action(cylinder_sphere(base, reference_disk(t), h), cal)

    def estimate(dt):
        diff = transport_phase(dt) - transport_phase(-dt)
        diff -= round(diff)
        return diff / (2.0 * dt)

    d1 = estimate(step)
    d2 = estimate(step / 2.0)
    if abs(d1 - d2) > 0.1 * max(abs(d2), 1e-4):
        raise StepTooLarge(f"estimates {d1:.6f} and {d2:.6f} disagree")
    return d2


def polyakov_wiegmann_defect(s1, s2, cal):
    """Deviation from the product formula for Wess-Zumino phases."""
    a1 = wz_action(s1, cal)
    a2 = wz_action(s2, cal)
    a12 = wz_action(s1.pointwise_product(s2), cal)
    corr = pw_sphere_integral(s1, s2, cal)
    ratio = cmath.exp(TWO_PI_I * (a1 + a2)) / (
        cmath.exp(TWO_PI_I * a12) * cmath.exp(TWO_PI_I * corr)
    )
    return abs(abs(ratio) - 1.0) + abs(cmath.phase(ratio)) / (2.0 * cmath.pi)


# ---------------------------------------------------------------------------
# loop concatenation lift


def _loop_rows(loop, circle_maps):
    """Rows tau(psi_t(z)) for a family of (weakly monotone) circle maps."""
    rows = np.stack(
        [
            quat.qnormalize(fourier_eval_periodic(loop.samples, np.mod(p, 1.0)))
            for p in circle_maps
        ]
    )
    rows[:, -1] = rows[:, 0]
    return rows


def _squeeze_maps(phi, first_half):
    """Circle map squeezing a based loop onto one half-circle.

    first_half: z -> phi(2z)/1 clamped to 1 after z = 1/2 (loop runs on the
    first half); otherwise the mirror version for the second half.
    """
    n = phi.n
    half = n // 2
    out = np.empty(n + 1)
    if first_half:
        out[: half + 1] = phi.values[::2]
        out[half:] = 1.0
    else:
        out[: half + 1] = 0.0
        out[half:] = phi.values[::2]
    return out


def _interp_family(target_map, t_rows=33):
    n = target_map.shape[0] - 1
    ident = np.arange(n + 1) / n
    weights = np.linspace(0.0, 1.0, t_rows)
    return [(1.0 - w) * ident + w * target_map for w in weights]


def _monotone_lift_family(maps):
    """Certify that each circle-map lift is weakly monotone of degree one.

    A family tau o psi_t with monotone degree-one lifts psi_t factors
    through the circle, so the homotopy has rank one exactly; this is the
    structural thinness certificate for internally built transports.
    """
    for p in maps:
        if np.any(np.diff(p) < -1e-12) or abs(p[-1] - p[0] - 1.0) > 1e-9:
            raise NotThin("circle-map family is not monotone of degree one")


def concat_lift(p1, p2, phi, cal):
    """Lift of loop concatenation to the extension.

    p1, p2 sit over based loops with a common basepoint; phi is the
    smoothing map opening sitting instants at the joints.  Each factor is
    thin-transported onto one half-circle, the two are fused over the
    triple (tau1 o phi, id, reverse(tau2 o phi)), and the result is
    thin-transported to the concatenated loop (both factors forward).
    """
    tau1 = boundary(p1)
    tau2 = boundary(p2)
    n = tau1.n
    if tau2.n != n or phi.n != n:
        raise BoundaryMismatch("loops and smoothing map need a common grid")
    if np.max(np.abs(tau1.samples[0] - tau2.samples[0])) > 1e-8:
        raise BoundaryMismatch("loops are not based at a common point")

    # step 1: squeeze each loop onto its half-circle along thin families;
    # thinness is certified structurally (monotone circle-map lifts), the
    # pointwise rank gate cannot resolve these strongly compressed rows
    psi1 = _squeeze_maps(phi, first_half=True)
    psi2 = _squeeze_maps(phi, first_half=False)
    # dense rows: the squeezes compress half the circle, and downstream
    # resampling needs enough rows to keep the product structure exact
    fam1 = _interp_family(psi1, t_rows=65)
    fam2 = _interp_family(psi2, t_rows=65)
    _monotone_lift_family(fam1)
    _monotone_lift_family(fam2)
    h1 = Homotopy("SU2", _loop_rows(tau1, fam1), periodic_z=True)
    h2 = Homotopy("SU2", _loop_rows(tau2, fam2), periodic_z=True)
    p1_hat = parallel_transport(p1, h1, disk_from_transport(p1.phi, h1), cal)
    p2_hat = parallel_transport(p2, h2, disk_from_transport(p2.phi, h2), cal)

    # step 2: fuse over (tau1 o phi, id, reverse(tau2 o phi)); the fused
    # loop runs tau1 o phi on the first half and tau2 o phi on the second
    half = n // 2
    fused = np.empty((n + 1, 4))
    fused[: half + 1] = quat.qnormalize(
        fourier_eval_periodic(tau1.samples, phi.values[::2])
    )
    fused[half:] = quat.qnormalize(
        fourier_eval_periodic(tau2.samples, phi.values[::2])
    )
    fused[0] = tau1.samples[0]
    fused[half] = tau1.samples[0]
    fused[-1] = tau1.samples[0]
    from .probes import disk_from_boundary

    fused_loop = LoopSU2.from_samples(fused)
    d_fused = disk_from_boundary(fused_loop, r_count=p1_hat.phi.r_count)
    q = fusion(p1_hat, p2_hat, d_fused, cal)

    # step 3: straighten the reparameterization to the concatenated loop
    concat_map = np.empty(n + 1)
    concat_map[: half + 1] = 0.5 * phi.values[::2]
    concat_map[half:] = 0.5 + 0.5 * phi.values[::2]
    target = np.empty((n + 1, 4))
    target[: half + 1] = tau1.samples[::2]
    target[half:] = tau2.samples[::2]
    target[half] = tau1.samples[0]
    target[-1] = target[0]
    target_loop = LoopSU2.from_samples(target)
    ident = np.arange(n + 1) / n
    fam3 = [
        (1.0 - w) * concat_map + w * ident for w in np.linspace(0.0, 1.0, 65)
    ]
    _monotone_lift_family(fam3)
    rows = np.stack(
        [
            quat.qnormalize(fourier_eval_periodic(target_loop.samples, np.mod(p, 1.0)))
            for p in fam3
        ]
    )
    rows[:, -1] = rows[:, 0]
    h3 = Homotopy("SU2", rows, periodic_z=True)
    # the fused rim and the reparameterized interpolation row agree only up
    # to interpolation error, so the junction tolerance is relaxed here
    d_target = disk_from_transport(q.phi, h3, tol=1e-5)
    return parallel_transport(q, h3, d_target, cal, tol=1e-5)
