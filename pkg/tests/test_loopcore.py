import numpy as np
import pytest

from gerbelab import loopcore as lc
from gerbelab import quat
from gerbelab.errors import (
    EndpointMismatch,
    NotOrientationPreserving,
    ResolutionError,
)

N = 256


def brute_unwrap(raw):
    """Independent unwrapping oracle: dense cumulative wrap-correction."""
    out = [raw[0] % 1.0]
    for a, b in zip(raw[:-1], raw[1:]):
        d = b - a
        d -= round(d)
        out.append(out[-1] + d)
    return np.array(out)


# ---------------------------------------------------------------------------
# unwrap / winding / average


def test_unwrap_constant():
    lift = lc.unwrap(np.full(N + 1, 0.3))
    assert lift.winding == 0
    assert np.allclose(lift.values, 0.3)


def test_unwrap_identity_winding():
    t = np.linspace(0.0, 1.0, 65)
    lift = lc.unwrap(np.mod(t, 1.0))
    assert lift.winding == 1
    assert np.max(np.abs(lift.values - t)) < 1e-12


def test_unwrap_against_dense_oracle():
    # oracle at N=4096 establishes the expected winding of the coarse grid
    t_fine = np.linspace(0.0, 1.0, 4097)
    f_fine = 3.0 * t_fine + 0.2 * np.sin(2 * np.pi * t_fine)
    oracle = brute_unwrap(np.mod(f_fine, 1.0))
    expected_winding = round(oracle[-1] - oracle[0])
    assert expected_winding == 3

    t = np.linspace(0.0, 1.0, N + 1)
    lift = lc.unwrap(np.mod(3.0 * t + 0.2 * np.sin(2 * np.pi * t), 1.0))
    assert lift.winding == expected_winding


def test_unwrap_rejects_coarse_data():
    # steps of exactly half a turn are ambiguous and must be refused
    t = np.linspace(0.0, 1.0, 9)
    with pytest.raises(ResolutionError):
        lc.unwrap(np.mod(4.0 * t, 1.0))


def test_unwrap_roundtrip_gauge():
    rng = np.random.default_rng(0)
    t = np.linspace(0.0, 1.0, N + 1)
    vals = -2.0 * t + 0.1 * np.sin(2 * np.pi * t) + 0.42
    lift = lc.RealLift.from_values(vals)
    again = lc.unwrap(np.mod(lift.values, 1.0))
    assert again.winding == -2
    assert np.max(np.abs(again.values - lift.canonicalize().values)) < 1e-12


def test_winding_number():
    t = np.linspace(0.0, 1.0, N + 1)
    tau = lc.LoopU1(lc.RealLift.from_values(-2.0 * t + 0.1 * np.sin(2 * np.pi * t)))
    assert lc.winding_number(tau) == -2


def test_average_lift():
    t = np.linspace(0.0, 1.0, N + 1)
    assert lc.average_lift(lc.RealLift.from_values(np.full(N + 1, 0.3))) == pytest.approx(0.3)
    assert lc.average_lift(lc.RealLift.from_values(t)) == pytest.approx(0.5)
    wavy = lc.RealLift.from_values(t + 0.1 * np.sin(2 * np.pi * t))
    assert lc.average_lift(wavy) == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------------------
# concat / reverse / fuse


def _u1_path(values):
    return lc.PathU1.from_values(values, N // 16)


def test_concat_reverse_trivial():
    c = _u1_path(np.full(N + 1, 0.7))
    cc = lc.concat(c, c)
    assert np.allclose(cc.values, 0.7)

    t = np.linspace(0.0, 1.0, N + 1)
    p = _u1_path(_collared_ramp(t))
    assert np.array_equal(lc.reverse(lc.reverse(p)).values, p.values)


def _collared_ramp(t, a=0.2, b=0.55):
    from gerbelab.numerics import plateau_ramp

    return a + (b - a) * plateau_ramp(t, 1.0 / 16.0, 15.0 / 16.0)


def test_concat_endpoint_guard():
    p1 = _u1_path(np.full(N + 1, 0.1))
    p2 = _u1_path(np.full(N + 1, 0.4))
    with pytest.raises(EndpointMismatch):
        lc.concat(p1, p2)


def test_fuse_closure_and_windings():
    t = np.linspace(0.0, 1.0, N + 1)
    g1 = _u1_path(_collared_ramp(t, 0.2, 1.7))
    g2 = _u1_path(_collared_ramp(t, 0.2, 0.7))
    loop = lc.fuse(g1, g2)
    expected = round(g1.end() - g2.end() - g1.start() + g2.start())
    assert loop.winding == expected == 1

    flat = lc.flat_loop(g1)
    assert flat.winding == 0
    assert flat.lift.values[0] == pytest.approx(flat.lift.values[-1])


def test_fuse_su2_and_rotation_identity(rng):
    from gerbelab import probes

    g1, g2, _ = probes.path_triple_su2(rng)
    loop = lc.fuse(g1, g2)
    # (g_i fused g_j) rotated by half a turn equals reverse pair fused
    rot = lc.rotate(loop, 0.5)
    other = lc.fuse(lc.reverse(g2), lc.reverse(g1))
    assert np.max(np.abs(rot.samples - other.samples)) < 1e-12


# ---------------------------------------------------------------------------
# retraction / rotate / reparameterize


def test_retraction_endpoints(rng):
    from gerbelab import probes

    phi = lc.default_smoothing(N)
    g = probes.random_path_su2(rng)
    r0 = lc.retraction(g, phi, 0.0)
    assert np.max(np.abs(r0.samples - g.samples[0])) < 1e-12
    r1 = lc.retraction(g, phi, 1.0)
    assert np.max(np.abs(r1.samples[0] - g.samples[0])) < 1e-12
    assert np.max(np.abs(r1.samples[-1] - g.samples[-1])) < 1e-12


def test_retraction_flat_family_is_thin(rng):
    from gerbelab import probes

    phi = lc.default_smoothing(N)
    g = probes.random_path_su2(rng, amp=0.5)
    rows = []
    for t in np.linspace(0.0, 1.0, 33):
        flat = lc.flat_loop(lc.retraction(g, phi, t))
        rows.append(flat.samples)
    h = lc.Homotopy("SU2", np.stack(rows), periodic_z=True)
    assert lc.is_thin(h)


def test_rotate_trivial_cases():
    t = np.linspace(0.0, 1.0, N + 1)
    tau = lc.LoopU1(lc.RealLift.from_values(2.0 * t + 0.05 * np.sin(2 * np.pi * t)))
    same = lc.rotate(tau, 0.0)
    assert np.array_equal(same.lift.values, tau.lift.values)
    full = lc.rotate(tau, 1.0)
    assert np.max(np.abs(full.lift.values - (tau.lift.values + 2.0))) < 1e-9


def test_reparameterize_guard():
    t = np.linspace(0.0, 1.0, N + 1)
    tau = lc.LoopU1(lc.RealLift.from_values(t))
    bad = t.copy()  # winding one but not strictly increasing
    bad[5] = bad[4]
    with pytest.raises(NotOrientationPreserving):
        lc.reparameterize(tau, bad)
    good = t + 0.05 * np.sin(2 * np.pi * t)
    out = lc.reparameterize(tau, good)
    assert out.winding == 1


# ---------------------------------------------------------------------------
# rank diagnostics


def test_rank_defect_constant_in_t():
    rng = np.random.default_rng(7)
    z = np.linspace(0.0, 1.0, N + 1)
    xi = np.array([0.2, 0.7, -0.4])
    tau = quat.qexp((0.8 * np.sin(2 * np.pi * z))[:, None] * xi)
    rows = np.tile(tau[None], (9, 1, 1))
    assert lc.rank_defect(lc.Homotopy("SU2", rows, True)) < 1e-14


def test_rank_defect_rotation_family():
    # grid rolls of a gentle loop: the family factors through one circle
    n = 512
    z = np.linspace(0.0, 1.0, n + 1)
    xi1 = np.array([1.0, 0.0, 0.0])
    xi2 = np.array([0.0, 1.0, 0.0])
    a = 0.3 * np.sin(2 * np.pi * z)
    b = 0.2 * np.cos(2 * np.pi * z)
    tau = quat.qmul(quat.qexp(a[:, None] * xi1), quat.qexp(b[:, None] * xi2))
    rows = []
    for k in range(0, 7):
        body = np.roll(tau[:-1], -k, axis=0)
        rows.append(np.concatenate([body, body[:1]], axis=0))
    h = lc.Homotopy("SU2", np.stack(rows), True)
    assert lc.rank_defect(h) < 1e-8


def _rank2_homotopy(t_rows=33, n=N):
    t = np.linspace(0.0, 1.0, t_rows)
    z = np.linspace(0.0, 1.0, n + 1)
    xi1 = np.array([1.0, 0.0, 0.0])
    xi2 = np.array([0.0, 1.0, 0.0])
    rows = quat.qmul(
        quat.qexp(t[:, None, None] * xi1[None, None, :]),
        quat.qexp(np.sin(2 * np.pi * z)[None, :, None] * xi2[None, None, :]),
    )
    return lc.Homotopy("SU2", rows, True)


def test_rank_defect_rank_two_oracle():
    h = _rank2_homotopy()
    defect = lc.rank_defect(h)
    # analytic Jacobian at an interior point: columns xi1-conjugated and xi2
    assert defect > 0.1
    assert not lc.is_thin(h)
    # stability under refinement within ten percent
    fine = _rank2_homotopy(65, 2 * N)
    assert abs(lc.rank_defect(fine) - defect) < 0.1 * defect


def test_u1_homotopy_rank():
    grid = np.zeros((9, N + 1))
    assert lc.rank_defect(lc.Homotopy("U1", grid, True)) == 0.0
