import numpy as np
import pytest

from whampdo import numeric as nc

SZ = np.diag([1.0, -1.0])


def test_kron_basics():
    assert np.array_equal(nc.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(nc.kron(SZ, SZ), np.diag([1, -1, -1, 1]))
    rng = np.random.default_rng(0)
    a, b, c = (rng.standard_normal(s) for s in ((2, 3), (3, 2), (2, 2)))
    k = nc.kron(a, b)
    assert k.shape == (6, 6)
    assert k[0, 0] == a[0, 0] * b[0, 0]
    # brute-force index formula
    for i in range(6):
        for j in range(6):
            assert abs(k[i, j] - a[i // 3, j // 2] * b[i % 3, j % 2]) < 1e-15
    assert np.allclose(nc.kron(nc.kron(a, b), c), nc.kron(a, nc.kron(b, c)), atol=1e-14)


def test_partial_trace_product_state():
    rng = np.random.default_rng(1)
    r = rng.standard_normal((2, 2))
    s = rng.standard_normal((3, 3))
    m = np.kron(r, s)
    assert np.allclose(nc.partial_trace(m, [2, 3], keep=[0]), r * np.trace(s))
    assert np.allclose(nc.partial_trace(np.eye(4), [2, 2], keep=[1]), 2 * np.eye(2))
    assert abs(np.trace(nc.partial_trace(m, [2, 3], keep=[1])) - np.trace(m)) < 1e-12


def test_partial_trace_composition():
    rng = np.random.default_rng(2)
    m = rng.standard_normal((24, 24)) + 1j * rng.standard_normal((24, 24))
    once = nc.partial_trace(m, [2, 3, 4], keep=[2])
    step = nc.partial_trace(m, [2, 3, 4], keep=[0, 2])
    twice = nc.partial_trace(step, [2, 4], keep=[1])
    assert nc.max_abs(once - twice) <= 1e-12


def test_partial_trace_dim_mismatch():
    with pytest.raises(nc.DimensionError):
        nc.partial_trace(np.eye(5), [2, 2], keep=[0])


def test_psd_and_distance():
    assert nc.is_psd(np.eye(3), 0)
    rho = np.diag([0.3, 0.7])
    assert nc.trace_distance(rho, rho) == 0
    assert abs(nc.trace_distance(np.diag([1, 0]), np.diag([0, 1])) - 1) < 1e-15
    assert not nc.is_psd(np.diag([1.0, -1e-3]))
    with pytest.raises(nc.NotHermitianError):
        nc.is_psd(np.array([[0, 1], [0, 0]]))


def test_hermitian_eig_orthonormal():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    rep = nc.hermitian_eig(a + a.conj().T)
    v = rep.eigenvectors
    assert rep.hermitian_flag
    assert nc.max_abs(v.conj().T @ v - np.eye(6)) <= 1e-10


def test_real_path_matches_complex():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((30, 30))
    h = a + a.T + 0j
    assert abs(nc.trace_norm(h) - np.abs(np.linalg.eigvalsh(h)).sum()) < 1e-12
    h2 = h + 1e-3j * (np.triu(np.ones((30, 30)), 1) - np.tril(np.ones((30, 30)), -1))
    assert abs(nc.trace_norm(h2) - np.abs(np.linalg.eigvalsh(h2)).sum()) < 1e-12


def test_psd_sqrt_and_inverse():
    assert np.allclose(nc.psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(nc.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    rng = np.random.default_rng(5)
    for dim in (1, 7, 64):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        m = g @ g.conj().T
        s = nc.psd_sqrt(m)
        assert nc.max_abs(s @ s - m) <= 1e-10 * max(1.0, nc.max_abs(m))
    with pytest.raises(nc.NotPSDError):
        nc.psd_sqrt(np.diag([1.0, -1.0]))
    with pytest.raises(nc.NotPSDError):
        nc.psd_inverse(np.diag([1.0, 0.0]))


def test_pullback():
    rep = [np.eye(2), SZ]
    assert np.allclose(nc.pullback(rep, np.eye(2)), [1, 0])
    assert np.allclose(nc.pullback(rep, SZ), [0, 1])
    with pytest.raises(nc.NotInImageError):
        nc.pullback(rep, np.array([[0, 1], [1, 0]]))


def test_solve_and_null_space():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    ns = nc.null_space(a)
    assert ns.shape == (2, 1)
    assert nc.max_abs(a @ ns) < 1e-12
    x, res = nc.solve_linear(np.eye(2), np.array([1.0, 2.0]))
    assert res < 1e-15 and np.allclose(x, [1, 2])
