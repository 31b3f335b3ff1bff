"""Transgression of 2-forms to loop- and path-space 1-forms, path
splittings, the bigon curving functional, and the surface reciprocity
cocycle.

Base spaces are products of U(1) and SU(2) factors.  Points and tangents
travel as flat arrays: each U(1) factor contributes one real lift
coordinate (in turns) and one tangent coordinate; each SU(2) factor four
quaternion components and three left-trivialized tangent coordinates.
A 2-form is a pointwise evaluator on such arrays; transgression is
quadrature of the pulled-back evaluator along sampled carriers.
"""

import cmath
from dataclasses import dataclass

import numpy as np

from . import quat
from .errors import EndpointDrift, GridMismatch, UnknownForm
from .numerics import diff_periodic, diff_uniform, open_spline, trapezoid_weights
from .su2geom import pw_two_form

FACTOR_LAYOUT = {
    "U1": ("u1",),
    "T2": ("u1", "u1"),
    "SU2": ("su2",),
    "T2xT2": ("u1", "u1", "u1", "u1"),
    "SU2xSU2": ("su2", "su2"),
}

_PT = {"u1": 1, "su2": 4}
_TAN = {"u1": 1, "su2": 3}


def point_dim(base):
    return sum(_PT[f] for f in FACTOR_LAYOUT[base])

def tangent_dim(base):
    return sum(_TAN[f] for f in FACTOR_LAYOUT[base])


def _factor_slices(base):
    pts, tans = [], []
    p = t = 0
    for f in FACTOR_LAYOUT[base]:
        pts.append(slice(p, p + _PT[f]))
        tans.append(slice(t, t + _TAN[f]))
        p += _PT[f]
        t += _TAN[f]
    return pts, tans


@dataclass(frozen=True)
class Form2:
    """Degree-2 form given by a pointwise evaluator on tangent pairs."""

    name: str
    base: str
    ev: callable

    def __call__(self, pts, v1, v2):
        return self.ev(pts, v1, v2)

    def check_antisymmetry(self, rng, trials=16, tol=1e-12):
        pts = random_points(self.base, rng, (trials,))
        v1 = rng.standard_normal((trials, tangent_dim(self.base)))
        v2 = rng.standard_normal((trials, tangent_dim(self.base)))
        d = self.ev(pts, v1, v2) + self.ev(pts, v2, v1)
        return float(np.max(np.abs(d))) < tol


def builtin_form(name, cal=None):
    """Built-in 2-forms: 'poincare' on the 2-torus, 'su2_rho' on SU(2)^2."""
    key = name.lower().replace("-", "_")
    if key in ("poincare", "poincare_t2"):

        def ev(pts, v1, v2):
            return v1[..., 0] * v2[..., 1] - v2[..., 0] * v1[..., 1]

        return Form2("poincare", "T2", ev)
    if key in ("su2_rho", "su2rho", "su2_pw"):
        if cal is None:
            raise UnknownForm("the SU(2) product form needs a calibration")

        def ev(pts, v1, v2):
            g2 = pts[..., 4:8]
            return pw_two_form(
                cal, g2, v1[..., :3], v1[..., 3:6], v2[..., :3], v2[..., 3:6]
            )

        return Form2("su2_rho", "SU2xSU2", ev)
    if key == "zero_t2":
        return Form2("zero", "T2", lambda pts, v1, v2: np.zeros(pts.shape[:-1]))
    raise UnknownForm(f"no built-in form named {name!r}")


def form_total_integral_t2(form, n=256):
    """Integral of a 2-form over the whole 2-torus (identity chart)."""
    if form.base != "T2":
        raise GridMismatch("total torus integral needs a form on the 2-torus")
    a = np.arange(n) / n
    pts = np.stack(np.meshgrid(a, a, indexing="ij"), axis=-1)
    e1 = np.zeros((n, n, 2))
    e1[..., 0] = 1.0
    e2 = np.zeros((n, n, 2))
    e2[..., 1] = 1.0
    return float(np.mean(form.ev(pts, e1, e2)))


def scale_form(form, factor):
    return Form2(form.name, form.base, lambda p, a, b: factor * form.ev(p, a, b))


def add_forms(f1, f2):
    if f1.base != f2.base:
        raise GridMismatch("forms live on different bases")
    return Form2(
        f"{f1.name}+{f2.name}",
        f1.base,
        lambda p, a, b: f1.ev(p, a, b) + f2.ev(p, a, b),
    )


# ---------------------------------------------------------------------------
# carriers: sampled paths and loops in a base space


def carrier_velocity(base, pts, periodic):
    """Left-trivialized velocity field of a sampled carrier."""
    pslices, tslices = _factor_slices(base)
    out = np.empty(pts.shape[:-1] + (tangent_dim(base),))
    for f, ps, ts in zip(FACTOR_LAYOUT[base], pslices, tslices):
        block = pts[..., ps]
        if periodic and f == "u1":
            # lifts carry the winding ramp; differentiate body and wrap
            body = block[:-1]
            wind = block[-1] - block[0]
            t = np.linspace(0.0, 1.0, block.shape[0])[:, None]
            per = block - wind[None, :] * t
            d = diff_periodic(per[:-1], axis=0)
            d = np.concatenate([d, d[:1]], axis=0) + wind[None, :]
            out[..., ts] = d
        elif periodic and f == "su2":
            d = diff_periodic(block[:-1], axis=0)
            d = np.concatenate([d, d[:1]], axis=0)
            out[..., ts] = quat.left_trivialize(block, d)
        elif f == "u1":
            out[..., ts] = diff_uniform(block, axis=0)
        else:
            out[..., ts] = quat.left_trivialize(block, diff_uniform(block, axis=0))
    return out


def random_points(base, rng, shape=()):
    pslices, _ = _factor_slices(base)
    out = np.empty(shape + (point_dim(base),))
    for f, ps in zip(FACTOR_LAYOUT[base], pslices):
        if f == "u1":
            out[..., ps] = rng.uniform(0.0, 1.0, shape + (1,))
        else:
            out[..., ps] = quat.random_unit(rng, shape)
    return out


def transgress_eval(form, carrier_pts, tangent_field, periodic):
    """Value of the transgressed 1-form on a tangent field along a carrier.

    int rho(c(s); c'(s), X(s)) ds with the trapezoid rule (periodic rule
    for loops via the duplicated endpoint).
    """
    pts = np.asarray(carrier_pts, dtype=float)
    field = np.asarray(tangent_field, dtype=float)
    if pts.shape[0] != field.shape[0]:
        raise GridMismatch("tangent field grid differs from the carrier grid")
    vel = carrier_velocity(form.base, pts, periodic)
    vals = form.ev(pts, vel, field)
    w = trapezoid_weights(pts.shape[0], 1.0)
    return float(np.sum(vals * w))


def _fuse_pair(base, g1, g2):
    """Loop carrier from a pair of paths with common endpoints."""
    n = g1.shape[0] - 1
    out = np.empty_like(g1)
    out[: n // 2 + 1] = g1[::2]
    second = g2[::-2].copy()
    pslices, _ = _factor_slices(base)
    for f, ps in zip(FACTOR_LAYOUT[base], pslices):
        if f == "u1":  # align the lift branches at the junction
            shift = np.round(g1[-1, ps] - g2[-1, ps])
            second[..., ps] += shift
    out[n // 2 :] = second
    return out


def path_splitting_defect(form, gamma1, gamma2, endpoint_tol=1e-9):
    """|int_Gamma fuse*eps - (int_{Gamma_1} kappa - int_{Gamma_2} kappa)|.

    gamma1, gamma2: (T+1, N+1, dim) families of paths with common moving
    endpoints; all three line integrals run over the family parameter.
    With the fused loop running through the first path forward, the
    splitting identity carries the first path with the positive sign.
    """
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    if g1.shape != g2.shape:
        raise GridMismatch("path families live on different grids")
    pslices, _ = _factor_slices(form.base)
    for ps, f in zip(pslices, FACTOR_LAYOUT[form.base]):
        ends = np.abs(g1[:, [0, -1], ps] - g2[:, [0, -1], ps])
        if f == "u1":
            ends = np.abs(ends - np.round(ends))
        if np.max(ends) > endpoint_tol:
            raise EndpointDrift("pair endpoints separate along the family")

    t_count = g1.shape[0]
    w_t = trapezoid_weights(t_count, 1.0)

    loops = np.stack([_fuse_pair(form.base, g1[k], g2[k]) for k in range(t_count)])
    d_loops = diff_uniform(loops, axis=0)
    eps_int = 0.0
    for k in range(t_count):
        field = _ambient_to_tangent(form.base, loops[k], d_loops[k])
        eps_int += w_t[k] * transgress_eval(form, loops[k], field, periodic=True)

    kappa = [0.0, 0.0]
    for i, g in enumerate((g1, g2)):
        # evaluate on the same nodes the fused loop subsamples, so the two
        # sides of the identity share their quadrature points
        gs = g[:, ::2]
        dg = diff_uniform(gs, axis=0)
        acc = 0.0
        for k in range(t_count):
            field = _ambient_to_tangent(form.base, gs[k], dg[k])
            acc += w_t[k] * transgress_eval(form, gs[k], field, periodic=False)
        kappa[i] = acc
    return abs(eps_int - (kappa[0] - kappa[1]))


def _ambient_to_tangent(base, pts, ambient):
    """Convert ambient derivatives of a carrier family to tangent fields."""
    pslices, tslices = _factor_slices(base)
    out = np.empty(pts.shape[:-1] + (tangent_dim(base),))
    for f, ps, ts in zip(FACTOR_LAYOUT[base], pslices, tslices):
        if f == "u1":
            out[..., ts] = ambient[..., ps]
        else:
            out[..., ts] = quat.left_trivialize(pts[..., ps], ambient[..., ps])
    return out


def contractibility_defect(form, path_pts, phi, t_count=65):
    """|int_{retraction of the path} kappa|; zero for rank-one evaluation.

    Velocities along the retraction are taken by the chain rule through one
    interpolant of the path, which keeps the two tangent slots exactly
    collinear; the defect then measures only the evaluator's antisymmetry.
    """
    pts = np.asarray(path_pts, dtype=float)
    spline = open_spline(pts)
    dspline = spline.derivative()
    w_t = trapezoid_weights(t_count, 1.0)
    s_vals = phi.values
    total = 0.0
    for k, t in enumerate(np.linspace(0.0, 1.0, t_count)):
        u = t * s_vals
        base_pts = spline(u)
        dgamma = dspline(u)
        v_s = dgamma * (t * _phi_prime(phi))[:, None]
        v_t = dgamma * s_vals[:, None]
        field_t = _ambient_to_tangent(form.base, base_pts, v_t)
        vel_s = _ambient_to_tangent(form.base, base_pts, v_s)
        vals = form.ev(base_pts, vel_s, field_t)
        w_s = trapezoid_weights(pts.shape[0], 1.0)
        total += w_t[k] * float(np.sum(vals * w_s))
    return abs(total)


def _phi_prime(phi):
    return diff_uniform(phi.values, axis=0)


# ---------------------------------------------------------------------------
# multiplicativity (the simplicial differential)


def _factor_mul(f, a, b):
    if f == "u1":
        return a + b
    return quat.qmul(a, b)


def _factor_push(f, a, b, va, vb):
    # differential of (a, b) -> ab in left-trivialized coordinates
    if f == "u1":
        return va + vb
    return quat.ad(quat.qconj(b), va) + vb


def group_mul(base, x, y):
    pslices, _ = _factor_slices(base)
    out = np.empty_like(x)
    for f, ps in zip(FACTOR_LAYOUT[base], pslices):
        out[..., ps] = _factor_mul(f, x[..., ps], y[..., ps])
    return out


def group_push(base, x, y, vx, vy):
    pslices, tslices = _factor_slices(base)
    out = np.empty_like(vx)
    for f, ps, ts in zip(FACTOR_LAYOUT[base], pslices, tslices):
        out[..., ts] = _factor_push(f, x[..., ps], y[..., ps], vx[..., ts], vy[..., ts])
    return out


def multiplicativity_defect(form, rng=None, trials=40):
    """max |Delta rho| over random points, for a form on a squared base.

    Delta is the alternating sum over the face maps of the bar construction
    of the underlying group G (the base is G x G).
    """
    half = {"T2": "U1", "SU2xSU2": "SU2", "T2xT2": "T2"}.get(form.base)
    if half is None:
        raise GridMismatch("multiplicativity needs a base of the shape G x G")
    rng = np.random.default_rng(3) if rng is None else rng
    g1 = random_points(half, rng, (trials,))
    g2 = random_points(half, rng, (trials,))
    g3 = random_points(half, rng, (trials,))
    td = tangent_dim(half)
    v = rng.standard_normal((2, 3, trials, td))

    def pair(x, y):
        return np.concatenate([x, y], axis=-1)

    def pair_t(vx, vy):
        return np.concatenate([vx, vy], axis=-1)

    worst = 0.0
    x, y, z = v[:, 0], v[:, 1], v[:, 2]
    g12 = group_mul(half, g1, g2)
    g23 = group_mul(half, g2, g3)
    term_23 = form.ev(pair(g2, g3), pair_t(y[0], z[0]), pair_t(y[1], z[1]))
    term_12_3 = form.ev(
        pair(g12, g3),
        pair_t(group_push(half, g1, g2, x[0], y[0]), z[0]),
        pair_t(group_push(half, g1, g2, x[1], y[1]), z[1]),
    )
    term_1_23 = form.ev(
        pair(g1, g23),
        pair_t(x[0], group_push(half, g2, g3, y[0], z[0])),
        pair_t(x[1], group_push(half, g2, g3, y[1], z[1])),
    )
    term_12 = form.ev(pair(g1, g2), pair_t(x[0], y[0]), pair_t(x[1], y[1]))
    delta = term_23 - term_12_3 + term_1_23 - term_12
    worst = float(np.max(np.abs(delta)))
    return worst


# ---------------------------------------------------------------------------
# bigons and the curving identity (base: the 2-torus)


@dataclass(frozen=True)
class Bigon:
    """Fixed-ends homotopy of paths in the based path space of the 2-torus.

    grid[s, t, u, :] is the point of the path Sigma(s, t) at parameter u;
    every path starts at the base point x = grid[s, t, 0].
    """

    grid: np.ndarray  # (S+1, T+1, U+1, 2)

    @classmethod
    def from_grid(cls, grid):
        grid = np.ascontiguousarray(grid, dtype=float)
        if grid.ndim != 4 or grid.shape[3] != 2:
            raise GridMismatch("bigon grid must be (S+1, T+1, U+1, 2)")
        x = grid[0, 0, 0]
        if np.max(np.abs(grid[:, :, 0, :] - x)) > 1e-12:
            raise GridMismatch("all bigon paths must start at the base point")
        if np.max(np.abs(grid - grid[0:1, :, :, :])[:, [0, -1]]) > 1e-12:
            raise GridMismatch("bigon must have fixed ends in t")
        grid.setflags(write=False)
        return cls(grid)

    @property
    def base_point(self):
        return self.grid[0, 0, 0]


def bigon_loop(bigon, t_index, phi):
    """The loop of the regression construction at one family parameter.

    Four quarters: the initial path, the transverse endpoint path (with the
    smoothing map applied in the homotopy direction), the reversed terminal
    path, and the constant stretch at the base point.
    """
    g = bigon.grid
    s_count, _, u_count, _ = g.shape
    u = u_count - 1
    quarter = u
    out = np.empty((4 * quarter + 1, 2))
    out[: quarter + 1] = g[0, t_index]
    spl = open_spline(g[:, t_index, -1, :], length=1.0)
    s_vals = phi.values[:: max(1, phi.n // quarter)][: quarter + 1]
    out[quarter : 2 * quarter + 1] = spl(s_vals)
    out[2 * quarter : 3 * quarter + 1] = g[-1, t_index][::-1]
    out[3 * quarter :] = bigon.base_point
    return out


def curving_defect(form, bigon, phi):
    """Difference of the two sides of the regressed-curving identity.

    Left: the bigon functional exp(-2 pi i int gamma_Sigma^* eps).  Right:
    exp(-2 pi i (int_Sigma ev_1^* rho + int_{gamma_1} kappa - int_{gamma_0}
    kappa)), the endpoint-surface quadrature plus the Stokes boundary terms
    of the path splitting.
    """
    g = bigon.grid
    s_count, t_count = g.shape[0], g.shape[1]
    w_t = trapezoid_weights(t_count, 1.0)

    loops = np.stack([bigon_loop(bigon, k, phi) for k in range(t_count)])
    d_loops = diff_uniform(loops, axis=0)
    eps_int = 0.0
    for k in range(t_count):
        eps_int += w_t[k] * transgress_eval(form, loops[k], d_loops[k], periodic=True)
    lhs = cmath.exp(-2j * cmath.pi * eps_int)

    surf = g[:, :, -1, :]  # (S+1, T+1, 2)
    ds = diff_uniform(surf, axis=0)
    dt = diff_uniform(surf, axis=1)
    vals = form.ev(surf, ds, dt)
    w_s = trapezoid_weights(s_count, 1.0)
    surf_int = float(np.sum(vals * np.outer(w_s, w_t)))

    kappa = []
    for idx in (0, -1):
        fam = g[idx]  # (T+1, U+1, 2)
        dfam = diff_uniform(fam, axis=0)
        acc = 0.0
        for k in range(t_count):
            acc += w_t[k] * transgress_eval(form, fam[k], dfam[k], periodic=False)
        kappa.append(acc)
    rhs = cmath.exp(-2j * cmath.pi * (surf_int + kappa[0] - kappa[1]))
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# reciprocity on surfaces


def reciprocity_cocycle(form, surface_kind, phi1, phi2):
    """exp(2 pi i int_Sigma (phi1, phi2)^* rho) for torus or disk surfaces.

    Torus maps are doubly periodic grids without duplicated edges; disk
    maps are polar grids (R+1) x M.  For the Poincare form the factor maps
    are real lift grids; for the SU(2) form, quaternion grids.
    """
    return cmath.exp(2j * cmath.pi * reciprocity_exponent(form, surface_kind, phi1, phi2))


def reciprocity_exponent(form, surface_kind, phi1, phi2):
    f1 = np.asarray(phi1, dtype=float)
    f2 = np.asarray(phi2, dtype=float)
    if f1.shape != f2.shape:
        raise GridMismatch("surface maps live on different grids")
    half = {"T2": "U1", "SU2xSU2": "SU2"}[form.base]
    if surface_kind == "torus":
        da1, db1 = _torus_derivs(half, f1)
        da2, db2 = _torus_derivs(half, f2)
        pts = _pair_points(half, f1, f2)
        va = _pair_tans(half, f1, f2, da1, da2)
        vb = _pair_tans(half, f1, f2, db1, db2)
        vals = form.ev(pts, va, vb)
        return float(np.mean(vals))
    if surface_kind == "disk":
        da1, db1 = _disk_derivs(half, f1)
        da2, db2 = _disk_derivs(half, f2)
        pts = _pair_points(half, f1, f2)
        va = _pair_tans(half, f1, f2, da1, da2)
        vb = _pair_tans(half, f1, f2, db1, db2)
        vals = form.ev(pts, va, vb)
        w_r = trapezoid_weights(f1.shape[0], 1.0)
        return float(np.sum(vals * w_r[:, None])) / f1.shape[1]
    raise GridMismatch(f"unknown surface kind {surface_kind!r}")


def _torus_derivs(half, f):
    da = diff_periodic(f, axis=0)
    db = diff_periodic(f, axis=1)
    if half == "SU2":
        return quat.left_trivialize(f, da), quat.left_trivialize(f, db)
    return da, db


def _disk_derivs(half, f):
    da = diff_uniform(f, axis=0)
    db = diff_periodic(f, axis=1)
    if half == "SU2":
        return quat.left_trivialize(f, da), quat.left_trivialize(f, db)
    return da, db


def _pair_points(half, f1, f2):
    if half == "SU2":
        return np.concatenate([f1, f2], axis=-1)
    return np.stack([f1, f2], axis=-1)


def _pair_tans(half, f1, f2, v1, v2):
    if half == "SU2":
        return np.concatenate([v1, v2], axis=-1)
    return np.stack([v1, v2], axis=-1)
