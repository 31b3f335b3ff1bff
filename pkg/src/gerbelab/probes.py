"""Seeded generators for smooth probe data.

Everything is band-limited and collar-compatible by construction, so the
quadrature error budget of the audits is dominated by the operations under
test rather than by rough probe data.
"""

import numpy as np

from . import quat
from .loopcore import Homotopy, LoopSU2, PathSU2, SmoothingMap
from .numerics import plateau_ramp
from .su2geom import DiskMap, SphereMap

DEFAULT_R = 128
DEFAULT_M = 256
DEFAULT_COLLAR = 0.125


def _radial_profile(r_count, collar=DEFAULT_COLLAR):
    """Smooth profile vanishing quadratically at 0, constant 1 on the collar."""
    r = np.linspace(0.0, 1.0, r_count + 1)
    return plateau_ramp(r, 0.0, 1.0 - collar)


def _angular_field(rng, m, modes=2, amp=1.0):
    theta = 2.0 * np.pi * np.arange(m) / m
    out = np.zeros(m)
    for k in range(1, modes + 1):
        a, b = rng.uniform(-amp, amp, 2) / k
        out += a * np.cos(k * theta) + b * np.sin(k * theta)
    return out


def random_direction(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def random_disk(rng, r_count=DEFAULT_R, m=DEFAULT_M, collar=DEFAULT_COLLAR, amp=0.8):
    """Random smooth disk map, radially constant on the collar."""
    prof = _radial_profile(r_count, collar)[:, None]
    a = prof * (_angular_field(rng, m, amp=amp)[None, :] + rng.uniform(-amp, amp))
    b = prof * (_angular_field(rng, m, amp=amp)[None, :] + rng.uniform(-amp, amp))
    xi1, xi2 = random_direction(rng), random_direction(rng)
    grid = quat.qmul(quat.qexp(a[..., None] * xi1), quat.qexp(b[..., None] * xi2))
    return DiskMap.from_grid(grid, collar)


def disk_from_boundary(loop, r_count=DEFAULT_R, collar=DEFAULT_COLLAR, base=None):
    """Geodesic filling of a loop that stays clear of the antipode of base.

    phi(r, theta) = base * exp(w(r) * log(base^{-1} tau(theta))): radially
    constant on the collar, center at `base` (default: loop sample 0).
    """
    rim = loop.samples[:-1]
    base = rim[0] if base is None else np.asarray(base, dtype=float)
    logs = quat.qlog(quat.qmul(quat.qconj(base), rim), margin=1e-6)
    prof = _radial_profile(r_count, collar)[:, None, None]
    grid = quat.qmul(base, quat.qexp(prof * logs[None, :, :]))
    return DiskMap.from_grid(grid, collar)


def perturbed_disk(rng, disk, amp=0.6):
    """Interior perturbation of a disk; the boundary loop is untouched.

    Two independent bump fields in independent algebra directions, so the
    perturbation genuinely changes the filling (nonzero action phases).
    """
    r_count, m = disk.r_count, disk.m
    r = np.linspace(0.0, 1.0, r_count + 1)
    grid = disk.grid
    for lo, hi in ((0.0, 0.45), (0.15, 0.6)):
        bump = plateau_ramp(r, lo, hi) * (
            1.0 - plateau_ramp(r, hi + 0.05, 1.0 - disk.collar)
        )
        field = bump[:, None] * (
            _angular_field(rng, m, amp=amp)[None, :] + rng.uniform(-amp, amp)
        )
        grid = quat.qmul(grid, quat.qexp(field[..., None] * random_direction(rng)))
    return DiskMap.from_grid(grid, disk.collar)


def bump_loop_su2(direction, support, n=DEFAULT_M, height=1.2):
    """Loop exp(b(z) * xi) supported strictly inside the interval `support`."""
    lo, hi = support
    z = np.arange(n + 1) / n
    mid = 0.5 * (lo + hi)
    up = plateau_ramp(z, lo, mid * 0.5 + lo * 0.5)
    down = 1.0 - plateau_ramp(z, mid * 0.5 + hi * 0.5, hi)
    b = height * np.minimum(up, down)
    samples = quat.qexp(b[:, None] * np.asarray(direction))
    return LoopSU2.from_samples(samples)


def random_sphere(rng, p=DEFAULT_M // 2, m=DEFAULT_M, amp=0.7, modes=2):
    """Random smooth sphere map built from polynomials in the embedding."""
    psi = np.pi * np.arange(p + 1) / p
    lon = 2.0 * np.pi * np.arange(m) / m
    x = np.sin(psi)[:, None] * np.cos(lon)[None, :]
    y = np.sin(psi)[:, None] * np.sin(lon)[None, :]
    z = np.cos(psi)[:, None] * np.ones_like(lon)[None, :]

    def field():
        coeffs = rng.uniform(-amp, amp, 10)
        basis = [np.ones_like(x), x, y, z, x * y, y * z, x * z, x * x, y * y, x * y * z]
        out = np.zeros_like(x)
        for c, bas in zip(coeffs[: modes * 5], basis[: modes * 5]):
            out += c * bas
        return out

    xi1, xi2 = random_direction(rng), random_direction(rng)
    grid = quat.qmul(
        quat.qexp(field()[..., None] * xi1), quat.qexp(field()[..., None] * xi2)
    )
    return SphereMap.from_grid(grid, "raw")


def rank_one_sphere(rng, p=DEFAULT_M // 2, m=DEFAULT_M, amp=1.3):
    """Sphere map exp(u(x) xi): image lies on a single one-parameter subgroup."""
    psi = np.pi * np.arange(p + 1) / p
    lon = 2.0 * np.pi * np.arange(m) / m
    x = np.sin(psi)[:, None] * np.cos(lon)[None, :]
    y = np.sin(psi)[:, None] * np.sin(lon)[None, :]
    z = np.cos(psi)[:, None] * np.ones_like(lon)[None, :]
    coeffs = rng.uniform(-amp, amp, 4)
    u = coeffs[0] + coeffs[1] * x + coeffs[2] * y + coeffs[3] * z
    xi = random_direction(rng)
    return SphereMap.from_grid(quat.qexp(u[..., None] * xi), "raw")


def rotation_homotopy(loop, angles):
    """Homotopy h(t, z) = tau(z + angle(t)); thin by construction."""
    n = loop.n
    rows = []
    for a in angles:
        k = a * n
        if abs(k - round(k)) > 1e-12:
            raise ValueError("rotation angles must be grid multiples here")
        body = np.roll(loop.samples[:-1], -int(round(k)) % n, axis=0)
        rows.append(np.concatenate([body, body[:1]], axis=0))
    return Homotopy("SU2", np.stack(rows), periodic_z=True)


def reparam_family_homotopy(loop, circle_maps):
    """h(t, z) = tau(psi_t(z)) for a family of monotone degree-1 lifts.

    Rows are produced by trigonometric interpolation of the loop, keeping
    the family spectrally smooth in both directions.
    """
    from .numerics import fourier_eval_periodic

    rows = []
    for psi in circle_maps:
        vals = quat.qnormalize(fourier_eval_periodic(loop.samples, np.mod(psi, 1.0)))
        vals[-1] = vals[0]
        rows.append(vals)
    return Homotopy("SU2", np.stack(rows), periodic_z=True)


def linear_interp_circle_maps(psi_end, t_rows):
    """Family interpolating linearly between the identity lift and psi_end.

    Linear weights keep the t-dependence polynomial, which is what the
    discrete rank diagnostics resolve best; sphere assemblies re-profile
    the rows themselves where flat junctions are needed.
    """
    n = psi_end.shape[0] - 1
    ident = np.arange(n + 1) / n
    weights = np.linspace(0.0, 1.0, t_rows)
    return [(1.0 - w) * ident + w * psi_end for w in weights]


def concat_circle_map_families(start_map, mid_map, end_map, t_rows=33):
    """Family running start -> mid -> end with a pause at the junction.

    The clock profile has vanishing rate where the two legs meet, so the
    concatenated family stays C^1 in the homotopy direction.
    """
    u = np.linspace(0.0, 1.0, t_rows)
    maps = []
    for x in u:
        if x <= 0.5:
            q = plateau_ramp(2.0 * x, 0.0, 1.0)
            maps.append((1.0 - q) * start_map + q * mid_map)
        else:
            q = plateau_ramp(2.0 * x - 1.0, 0.0, 1.0)
            maps.append((1.0 - q) * mid_map + q * end_map)
    return maps


def random_path_su2(rng, n=DEFAULT_M, collar=None, amp=0.8, start=None, end=None):
    """Random smooth SU(2) path with sitting instants.

    With `start`/`end` given, the path runs between them along a geodesic
    deformed by bump fields (endpoints exact).
    """
    collar = n // 16 if collar is None else collar
    t = np.arange(n + 1) / n
    ramp = plateau_ramp(t, collar / n, 1.0 - collar / n)
    start = quat.ONE if start is None else np.asarray(start, dtype=float)
    if end is None:
        end = quat.qmul(start, quat.qexp(rng.uniform(-amp, amp) * random_direction(rng)))
    delta = quat.qlog(quat.qmul(quat.qconj(start), end), margin=1e-9)
    bump = ramp * (1.0 - ramp) * 4.0
    wig = sum(
        rng.uniform(-amp, amp) / (k * k) * np.sin(np.pi * k * t) * bump
        for k in range(1, 4)
    )
    xi = random_direction(rng)
    samples = quat.qmul(
        start, quat.qexp(ramp[:, None] * delta[None, :] + wig[:, None] * xi[None, :])
    )
    samples[: collar + 1] = start
    samples[-collar - 1 :] = end
    return PathSU2.from_samples(samples, collar)


def path_triple_su2(rng, n=DEFAULT_M, amp=0.7):
    """Three random paths sharing endpoints (a fusion triple)."""
    start = quat.random_unit(rng)
    end = quat.qmul(start, quat.qexp(rng.uniform(0.3, 1.0) * random_direction(rng)))
    return tuple(random_path_su2(rng, n, amp=amp, start=start, end=end) for _ in range(3))


def smoothing_from(rng=None, n=DEFAULT_M, collar=None):
    from .loopcore import default_smoothing

    return default_smoothing(n, collar)


def smoothing_variant(n=DEFAULT_M, collar=None, skew=2.0):
    """A second smoothing map, distinct from the default one."""
    collar = n // 16 if collar is None else collar
    t = np.linspace(0.0, 1.0, n + 1)
    base = plateau_ramp(t, collar / n, 1.0 - collar / n)
    vals = base**skew
    vals[0], vals[-1] = 0.0, 1.0
    return SmoothingMap.from_values(vals, collar)


# ---------------------------------------------------------------------------
# probes for the transgression module (flat-array carriers)


def random_t2_path(rng, n=DEFAULT_M, collar=None, amp=0.4, start=None, end=None):
    """Smooth path in the 2-torus, carried as an (N+1, 2) lift array."""
    collar = n // 16 if collar is None else collar
    t = np.arange(n + 1) / n
    ramp = plateau_ramp(t, collar / n, 1.0 - collar / n)
    start = rng.uniform(0.0, 1.0, 2) if start is None else np.asarray(start, float)
    end = start + rng.uniform(-amp, amp, 2) if end is None else np.asarray(end, float)
    bump = 4.0 * ramp * (1.0 - ramp)
    out = start[None, :] + ramp[:, None] * (end - start)[None, :]
    for k in range(1, 4):
        out += (bump * np.sin(np.pi * k * t))[:, None] * rng.uniform(-amp, amp, 2)[None, :] / (k * k)
    out[: collar + 1] = start
    out[-collar - 1 :] = end
    return out


def pair_family_t2(rng, t_rows=33, n=DEFAULT_M, amp=0.35, move_first=True):
    """Family of path pairs in the 2-torus with common moving endpoints."""
    collar = n // 16
    s = np.arange(n + 1) / n
    ramp = plateau_ramp(s, collar / n, 1.0 - collar / n)
    bump = 4.0 * ramp * (1.0 - ramp)
    t = np.linspace(0.0, 1.0, t_rows)
    e0 = rng.uniform(0.0, 1.0, 2)[None, :] + 0.3 * np.sin(
        2.0 * np.pi * t
    )[:, None] * rng.uniform(-amp, amp, 2)[None, :]
    e1 = e0 + rng.uniform(0.3, 0.8, 2)[None, :] + 0.3 * np.cos(
        2.0 * np.pi * t
    )[:, None] * rng.uniform(-amp, amp, 2)[None, :]

    def family(extra):
        out = e0[:, None, :] + ramp[None, :, None] * (e1 - e0)[:, None, :]
        for k in range(1, 3):
            coeff = rng.uniform(-amp, amp, 2) / k
            mod_t = 1.0 + 0.5 * np.sin(2.0 * np.pi * k * t + rng.uniform(0, 6))
            out = out + (extra * np.outer(mod_t, bump * np.sin(np.pi * k * s)))[
                ..., None
            ] * coeff[None, None, :]
        out[:, : collar + 1] = e0[:, None, :]
        out[:, -collar - 1 :] = e1[:, None, :]
        return out

    g1 = family(1.0)
    g2 = family(1.0 if move_first else 0.0)
    return g1, g2


def su2xsu2_path(rng, n=DEFAULT_M, amp=0.6):
    """Path in SU(2) x SU(2) as an (N+1, 8) array."""
    p1 = random_path_su2(rng, n, amp=amp, start=quat.random_unit(rng))
    p2 = random_path_su2(rng, n, amp=amp, start=quat.random_unit(rng))
    return np.concatenate([p1.samples, p2.samples], axis=-1)


def random_bigon(rng, s_rows=33, t_rows=33, u_rows=64, amp=0.35):
    """Random bigon in the based path space of the 2-torus.

    Paths have sitting instants in u; the homotopy is collared in s so the
    extracted loops stay grid-smooth.
    """
    x = rng.uniform(0.0, 1.0, 2)
    u = np.arange(u_rows + 1) / u_rows
    w1 = plateau_ramp(u, 1.0 / 16.0, 14.0 / 16.0)
    w2 = 4.0 * w1 * (1.0 - w1)
    s = np.linspace(0.0, 1.0, s_rows)
    t = np.linspace(0.0, 1.0, t_rows)
    sc = plateau_ramp(s, 0.1, 0.9)
    tb = 4.0 * t * (1.0 - t)

    c0 = rng.uniform(-amp, amp, 2)
    c1 = rng.uniform(-amp, amp, 2)
    # endpoint curve: fixed at t = 0, 1; deformed by the homotopy via sc
    base_c = c0[None, :] + t[:, None] * (c1 - c0)[None, :] + np.outer(
        np.sin(np.pi * t) , rng.uniform(-amp, amp, 2)
    )
    wig = np.outer(tb * np.sin(2.0 * np.pi * t + rng.uniform(0, 6)), rng.uniform(-amp, amp, 2))
    c_field = base_c[None, :, :] + sc[:, None, None] * wig[None, :, :]
    d_field = sc[:, None, None] * np.outer(tb, rng.uniform(-amp, amp, 2))[None, :, :]

    grid = (
        x[None, None, None, :]
        + w1[None, None, :, None] * c_field[:, :, None, :]
        + w2[None, None, :, None] * d_field[:, :, None, :]
    )
    from .transgress import Bigon

    return Bigon.from_grid(grid)


def pair_family_su2xsu2(rng, t_rows=33, n=DEFAULT_M, amp=0.3):
    """Family of path pairs in SU(2) x SU(2) with common moving endpoints."""
    xi = [random_direction(rng) for _ in range(4)]
    fields_a = pair_family_t2(rng, t_rows, n, amp)
    fields_b = pair_family_t2(rng, t_rows, n, amp)

    def assemble(fa, fb):
        qa = quat.qmul(quat.qexp(fa[..., :1] * xi[0]), quat.qexp(fa[..., 1:] * xi[1]))
        qb = quat.qmul(quat.qexp(fb[..., :1] * xi[2]), quat.qexp(fb[..., 1:] * xi[3]))
        return np.concatenate([qa, qb], axis=-1)

    g1 = assemble(fields_a[0], fields_b[0])
    g2 = assemble(fields_a[1], fields_b[1])
    return g1, g2
