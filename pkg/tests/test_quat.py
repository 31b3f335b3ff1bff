import numpy as np
import pytest

from gerbelab import quat
from gerbelab.errors import AntipodeError


def test_exp_log_roundtrip(rng):
    q = quat.random_unit(rng, (200,))
    # keep away from the antipode
    q[q[:, 0] < -0.9] *= -1.0
    back = quat.qexp(quat.qlog(q))
    assert np.max(np.abs(back - q)) < 1e-12


def test_exp_at_zero_and_equator():
    assert np.allclose(quat.qexp(np.zeros(3)), quat.ONE)
    assert np.allclose(quat.qlog(quat.ONE), np.zeros(3))
    # closed form: exp((pi/2) e1) = e1 as a unit quaternion
    v = np.array([np.pi / 2, 0.0, 0.0])
    assert np.allclose(quat.qexp(v), [0.0, 1.0, 0.0, 0.0], atol=1e-15)


def test_log_margin_guard():
    near = quat.qnormalize(np.array([-1.0, 1e-4, 0.0, 0.0]))
    with pytest.raises(AntipodeError):
        quat.qlog(near, margin=0.2)


def test_mul_and_ad_consistency(rng):
    q = quat.random_unit(rng, (50,))
    xi = rng.standard_normal((50, 3))
    # Ad as conjugation in the ambient algebra
    pure = np.concatenate([np.zeros((50, 1)), xi], axis=-1)
    conj = quat.qmul(quat.qmul(q, pure), quat.qconj(q))
    assert np.max(np.abs(conj[:, 0])) < 1e-12
    assert np.max(np.abs(conj[:, 1:] - quat.ad(q, xi))) < 1e-12


def test_dqexp_matches_finite_differences(rng):
    v = rng.standard_normal(3)
    dv = rng.standard_normal(3)
    h = 1e-6
    fd = (quat.qexp(v + h * dv) - quat.qexp(v - h * dv)) / (2 * h)
    assert np.max(np.abs(fd - quat.dqexp(v, dv))) < 1e-9
    # smooth at the origin too
    fd0 = (quat.qexp(h * dv) - quat.qexp(-h * dv)) / (2 * h)
    assert np.max(np.abs(fd0 - quat.dqexp(np.zeros(3), dv))) < 1e-9
