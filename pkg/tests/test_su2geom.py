import numpy as np
import pytest

from gerbelab import probes, quat
from gerbelab import su2geom as sg
from gerbelab.errors import (
    BoundaryMismatch,
    CalibrationDiverged,
    SeamMismatch,
    TranslationSearchFailed,
)
from gerbelab.loopcore import Homotopy, fuse


# ---------------------------------------------------------------------------
# calibration


def test_calibration_value_and_stability(cal):
    # closed form: the scale is 1/(4 pi^2)
    assert cal.c_h == pytest.approx(1.0 / (4.0 * np.pi**2), rel=1e-6)
    again = sg.calibrate(32)
    assert again.c_h == pytest.approx(cal.c_h, rel=1e-3)
    assert again.s_rho == cal.s_rho


def test_three_form_integral_linearity(cal):
    assert sg.integrate_three_form(cal, 48) == pytest.approx(1.0, abs=1e-3)
    half = sg.Calibration(cal.c_h / 2.0, cal.s_rho, cal.resolution)
    assert sg.integrate_three_form(half, 48) == pytest.approx(0.5, abs=1e-3)


def test_calibration_rejects_nonpositive():
    with pytest.raises(CalibrationDiverged):
        sg.Calibration(-1.0, 1.0, 32)


# ---------------------------------------------------------------------------
# the product form


def test_pw_form_antisymmetry_bilinearity(cal, rng):
    g1 = quat.random_unit(rng, (30,))
    g2 = quat.random_unit(rng, (30,))
    v = rng.standard_normal((4, 30, 3))
    a = sg.pw_two_form(cal, g2, v[0], v[1], v[2], v[3])
    b = sg.pw_two_form(cal, g2, v[2], v[3], v[0], v[1])
    assert np.max(np.abs(a + b)) < 1e-14
    # flat second slot
    zero = np.zeros_like(v[0])
    assert np.max(np.abs(sg.pw_two_form(cal, g2, v[0], zero, v[2], zero))) == 0.0
    # bilinearity
    c = sg.pw_two_form(cal, g2, 2.0 * v[0], 2.0 * v[1], v[2], v[3])
    assert np.max(np.abs(c - 2.0 * a)) < 1e-14


def test_pw_form_against_finite_difference_pullback(cal, rng):
    """Independent oracle: Maurer-Cartan pairings from difference quotients."""
    g1, g2 = quat.random_unit(rng), quat.random_unit(rng)
    xi = rng.standard_normal((2, 3))
    eta = rng.standard_normal((2, 3))
    h = 1e-5

    def theta_left(g, x):
        plus = quat.qmul(g, quat.qexp(h * x))
        minus = quat.qmul(g, quat.qexp(-h * x))
        return quat.qmul(quat.qconj(g), (plus - minus) / (2 * h))[1:]

    def theta_right(g, x):
        plus = quat.qmul(g, quat.qexp(h * x))
        minus = quat.qmul(g, quat.qexp(-h * x))
        return quat.qmul((plus - minus) / (2 * h), quat.qconj(g))[1:]

    oracle = cal.s_rho * cal.c_h * (
        np.dot(theta_left(g1, xi[0]), theta_right(g2, eta[1]))
        - np.dot(theta_left(g1, xi[1]), theta_right(g2, eta[0]))
    )
    val = sg.pw_two_form(cal, g2, xi[0], eta[0], xi[1], eta[1])
    assert val == pytest.approx(oracle, abs=1e-8)


def test_simplicial_identities(cal):
    dh, drho = sg.simplicial_identity_defects(cal, n_samples=20, seed=3)
    assert drho < 1e-6
    assert dh < 1e-4


def test_delta_rho_at_identity(cal, rng):
    # with g2 = 1 the adjoint factor is trivial and the sum telescopes
    g1, g3 = quat.random_unit(rng), quat.random_unit(rng)
    g2 = quat.ONE
    v = rng.standard_normal((2, 9))
    x, y, z = v[:, :3], v[:, 3:6], v[:, 6:]
    t_12 = sg.pw_two_form(cal, g2, x[0], y[0], x[1], y[1])
    t_12_3 = sg.pw_two_form(
        cal, g3, sg._push_mul(g2, x[0], y[0]), z[0], sg._push_mul(g2, x[1], y[1]), z[1]
    )
    t_23 = sg.pw_two_form(cal, g3, y[0], z[0], y[1], z[1])
    t_1_23 = sg.pw_two_form(
        cal, quat.qmul(g2, g3), x[0], sg._push_mul(g3, y[0], z[0]),
        x[1], sg._push_mul(g3, y[1], z[1]),
    )
    assert abs(t_12 + t_12_3 - t_23 - t_1_23) < 1e-12


# ---------------------------------------------------------------------------
# Wess-Zumino action


def test_wz_constant_map(cal):
    grid = np.tile(quat.ONE, (65, 128, 1))
    s = sg.wz_action(sg.SphereMap.from_grid(grid), cal)
    assert min(s, 1.0 - s) < 1e-12


def test_wz_rank_one_vanishing(cal, rng):
    for _ in range(3):
        sphere = probes.rank_one_sphere(rng)
        s = sg.wz_action(sphere, cal)
        assert min(s, 1.0 - s) < 1e-3


def test_wz_equator_half_volume(cal):
    # oracle: the geodesic cone fills the cap of colatitude pi/2, and the
    # normalized cap volume is pi (2 psi - sin 2 psi) evaluated there
    cap = np.pi * (2 * (np.pi / 2) - np.sin(np.pi)) / (2 * np.pi**2)
    assert cap == pytest.approx(0.5)
    s = sg.wz_action(sg.equator_sphere(128, 256), cal)
    assert abs(np.exp(2j * np.pi * s) - np.exp(2j * np.pi * cap)) < 1e-2


def test_wz_left_invariance(cal, rng):
    sphere = probes.random_sphere(rng)
    g = quat.random_unit(rng)
    s0 = sg.wz_action(sphere, cal)
    s1 = sg.wz_action(sphere.left_translated(g), cal)
    assert abs(np.exp(2j * np.pi * s0) - np.exp(2j * np.pi * s1)) < 2e-3


def test_wz_translation_search(cal, rng):
    # a map hitting the antipode forces a translation; margins still succeed
    sphere = probes.random_sphere(rng)
    moved = sphere.left_translated(np.array([-1.0, 0.0, 0.0, 0.0]))
    s0 = sg.wz_action(sphere, cal, seed=5)
    s1 = sg.wz_action(moved, cal, seed=5)
    assert abs(np.exp(2j * np.pi * s0) - np.exp(2j * np.pi * s1)) < 2e-3
    with pytest.raises(TranslationSearchFailed):
        sg._find_translation(sg.equator_sphere(16, 32).grid, 0, margin=2.1)


def test_wz_refinement_guard(cal, rng):
    sphere = probes.random_sphere(rng, p=64, m=128)
    sg.wz_action(sphere, cal, refine_check=2)  # should not raise


# ---------------------------------------------------------------------------
# disk integrals and assembly


def test_pw_disk_integral_flat_slots(cal, rng):
    d = probes.random_disk(rng)
    const = sg.DiskMap.from_grid(np.tile(quat.ONE, (d.r_count + 1, d.m, 1)), 0.125)
    assert sg.pw_disk_integral(d, const, cal) == 0.0
    assert sg.pw_disk_integral(const, d, cal) == 0.0


def test_pw_disk_integral_refinement(cal):
    from gerbelab.numerics import plateau_ramp

    def build(r_count, m):
        r = np.linspace(0.0, 1.0, r_count + 1)
        th = 2.0 * np.pi * np.arange(m) / m
        prof = plateau_ramp(r, 0.0, 0.875)
        a = prof[:, None] * (0.6 * np.cos(th) + 0.3)[None, :]
        b = prof[:, None] * (0.4 * np.sin(2 * th) - 0.2)[None, :]
        xi1 = np.array([1.0, 0.0, 0.0])
        xi2 = np.array([0.0, 0.6, 0.8])
        grid = quat.qmul(quat.qexp(a[..., None] * xi1), quat.qexp(b[..., None] * xi2))
        return sg.DiskMap.from_grid(grid, 0.125), sg.DiskMap.from_grid(
            quat.qmul(quat.qexp(b[..., None] * xi2), quat.qexp(a[..., None] * xi1)),
            0.125,
        )

    c1, c2 = build(64, 128)
    f1, f2 = build(128, 256)
    coarse = sg.pw_disk_integral(c1, c2, cal)
    fine = sg.pw_disk_integral(f1, f2, cal)
    assert abs(coarse - fine) < 1e-3


def test_glue_and_orientation(cal, rng):
    d = probes.random_disk(rng, amp=0.6)
    d2 = probes.perturbed_disk(rng, d)
    s_same = sg.wz_action(sg.glue_sphere(d, d), cal)
    assert min(s_same, 1.0 - s_same) < 1e-3
    s_ab = sg.wz_action(sg.glue_sphere(d, d2), cal)
    s_ba = sg.wz_action(sg.glue_sphere(d2, d), cal)
    total = (s_ab + s_ba) % 1.0
    assert min(total, 1.0 - total) < 2e-3
    assert sg.glue_sphere(d, d2).grid[d.r_count].tolist() == d.grid[-1].tolist()
    with pytest.raises(BoundaryMismatch):
        sg.glue_sphere(d, probes.random_disk(rng))


def test_trisect_seams_and_poles(cal, rng):
    g1, g2, g3 = probes.path_triple_su2(rng)
    d12 = probes.disk_from_boundary(fuse(g1, g2))
    d23 = probes.disk_from_boundary(fuse(g2, g3))
    d13 = probes.disk_from_boundary(fuse(g1, g3))
    psi = sg.trisect_sphere(d12, d23, d13)
    p = psi.p_count
    seam = psi.grid[:, 0]
    assert np.array_equal(seam, d23.grid[-1, np.arange(p + 1) % psi.m])
    assert np.max(np.abs(psi.grid[0] - g1.start())) < 1e-12
    assert np.max(np.abs(psi.grid[-1] - g1.end())) < 1e-12
    with pytest.raises(SeamMismatch):
        sg.trisect_sphere(d12, d23, probes.disk_from_boundary(fuse(g2, g1)))


def test_trisect_flat_triple_vanishes(cal, rng):
    from gerbelab.mickelsson import thin_disk

    g1, _, _ = probes.path_triple_su2(rng)
    thin = thin_disk(g1)
    s = sg.wz_action(sg.trisect_sphere(thin, thin, thin), cal)
    assert min(s, 1.0 - s) < 1e-3


def test_trisect_rotation_consistency(rng):
    g1, g2, g3 = probes.path_triple_su2(rng)
    d12 = probes.disk_from_boundary(fuse(g1, g2))
    d23 = probes.disk_from_boundary(fuse(g2, g3))
    d13 = probes.disk_from_boundary(fuse(g1, g3))
    psi = sg.trisect_sphere(d12, d23, d13)
    psirot = sg.trisect_sphere(d23.rotated(0.5), d12.rotated(0.5), d13.rotated(0.5))
    m = psi.m
    flipped = psi.grid[::-1][:, (-np.arange(m)) % m]
    assert np.max(np.abs(psirot.grid - flipped)) < 1e-9


def test_cylinder_boundary_checks(cal, rng):
    g1, g2, _ = probes.path_triple_su2(rng)
    tau = fuse(g1, g2)
    d0 = probes.disk_from_boundary(tau)
    rows = np.tile(tau.samples[None], (9, 1, 1))
    h = Homotopy("SU2", rows, periodic_z=True)
    sphere = sg.cylinder_sphere(d0, d0, h)
    assert sphere.provenance == "cylinder"
    s = sg.wz_action(sphere, cal)
    assert min(s, 1.0 - s) < 1e-3  # degenerate cylinder closes to an integer
    with pytest.raises(BoundaryMismatch):
        sg.cylinder_sphere(probes.random_disk(rng), d0, h)


def test_polyakov_wiegmann(cal, rng):
    from gerbelab.mickelsson import polyakov_wiegmann_defect

    s1 = probes.random_sphere(rng)
    s2 = probes.random_sphere(rng)
    assert polyakov_wiegmann_defect(s1, s2, cal) < 5e-3
    const = sg.SphereMap.from_grid(np.tile(quat.ONE, (s1.p_count + 1, s1.m, 1)))
    assert polyakov_wiegmann_defect(s1, const, cal) < 1e-3
    r1 = probes.rank_one_sphere(rng)
    assert polyakov_wiegmann_defect(r1, r1, cal) < 2e-3
