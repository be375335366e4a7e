import numpy as np
import pytest

from conftest import HOPF_PRESETS, elements_of, spec_of
from whampdo.distinguished import NotBiconnectedError, distinguished_elements


def test_z2_values(z2):
    s, d = z2
    assert np.allclose(d.Omega, [0.5, 0.5])
    assert np.allclose(d.omega, [1, 0])
    assert d.D2 == pytest.approx(2)
    assert np.allclose(d.xi, [2, 0])
    assert np.allclose(s.phi(d.c_omega), np.eye(2) / 2)
    assert np.allclose(np.linalg.inv(s.phi(d.xi)), np.eye(2) / 2)


def test_lee_yang_reference_values(lee_yang):
    s, d = lee_yang
    r5 = 5**0.5
    assert d.D2 == pytest.approx((5 + r5) / 2, abs=1e-10)
    assert max(d.dual_fp_dims) == pytest.approx((1 + r5) / 2, abs=1e-10)
    want = np.diag([2 / (5 + r5)] * 2 + [1 / r5] * 3)
    assert np.abs(s.phi(d.c_omega) - want).max() <= 1e-10
    assert d.eps1 == pytest.approx(2)


@pytest.mark.parametrize("name", HOPF_PRESETS)
def test_xi_is_scalar_on_hopf(name):
    s, d = spec_of(name), elements_of(name)
    assert np.abs(d.xi - d.D2 * s.unit).max() <= 1e-10
    assert np.abs(d.Omega - d.haar).max() <= 1e-10
    assert np.abs(d.T_matrix - s.antipode).max() <= 1e-10


def test_omega_normalization(any_preset):
    s, d = spec_of(any_preset), elements_of(any_preset)
    if any_preset in HOPF_PRESETS:
        assert d.omega_of(s.unit) == pytest.approx(1)
    assert d.omega_of(s.unit) == pytest.approx(np.trace(s.phi(d.c_omega)))
    assert d.omega_of(d.Omega).real > 0
    # T is an involution
    assert np.abs(d.T_matrix @ d.T_matrix - np.eye(s.n)).max() <= 1e-10


def test_chihat_trivial_is_positive(any_preset):
    s, d = spec_of(any_preset), elements_of(any_preset)
    m = s.phi(d.chihat_trivial())
    assert np.abs(m - m.conj().T).max() <= 1e-12
    assert np.linalg.eigvalsh(m).min() >= -1e-12


def test_g_implements_s_squared(lee_yang):
    s, d = lee_yang
    S2 = s.antipode @ s.antipode
    for i in range(s.n):
        x = s.e(i)
        assert np.abs(S2 @ x - s.mul_all(d.g, x, s.inverse(d.g))).max() <= 1e-10
    # S^2 is not the identity on the weak example
    assert np.abs(S2 - np.eye(s.n)).max() > 0.1


def test_disconnected_is_refused():
    from whampdo.spec import WhaSpec

    # groupoid algebra of two objects with no arrows between them: not connected
    n = 2
    mult = np.zeros((n, n, n))
    for i in range(n):
        mult[i, i, i] = 1
    cop = np.zeros((n, n, n))
    for i in range(n):
        cop[i, i, i] = 1
    rep = np.array([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    s = WhaSpec(["a", "b"], mult, np.ones(2), np.eye(2), cop, np.ones(2), np.eye(2), rep, name="two-objects")
    with pytest.raises(NotBiconnectedError):
        distinguished_elements(s)
