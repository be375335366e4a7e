import numpy as np
import pytest

from conftest import BICONNECTED, SIGMA_Z, elements_of, random_positive, spec_of
from whampdo import numeric as nc
from whampdo import presets
from whampdo.axioms import BudgetExceeded
from whampdo.mpdo import (
    NotPositiveElementError,
    build_rho,
    cyclic_shift,
    export_mpo_tensor,
    marginal_check,
    mpo_closure_residual,
    read_dump,
    shift_invariance_residual,
    write_dump,
)


@pytest.mark.parametrize("N", range(1, 9))
def test_z2_closed_form(z2, N):
    s, d = z2
    want = (nc.kron_all([np.eye(2)] * N) + nc.kron_all([SIGMA_Z] * N)) / 2**N
    st = build_rho(s, d, d.Omega, N)
    assert np.abs(st.rho - want).max() <= 1e-12


def test_single_site(z2):
    s, d = z2
    assert np.allclose(build_rho(s, d, d.Omega, 1).rho, np.diag([1, 0]))
    assert np.allclose(build_rho(s, d, s.unit, 1).rho, np.eye(2) / 2)
    assert np.allclose(build_rho(s, d, s.unit, 3).rho, np.eye(8) / 8)


@pytest.mark.parametrize("name", BICONNECTED)
def test_states_are_density_matrices(name):
    s, d = spec_of(name), elements_of(name)
    for x in (d.Omega, s.unit, random_positive(s)):
        st = build_rho(s, d, x, 3)
        inv = st.invariants()
        assert max(inv.values()) <= 1e-10


def test_lee_yang_states(lee_yang):
    s, d = lee_yang
    for N in (2, 3, 4):
        st = build_rho(s, d, d.Omega, N)
        assert nc.min_eigenvalue(st.rho) >= -1e-12
        assert shift_invariance_residual(st) <= 1e-12


def test_non_positive_rejected(z2):
    s, d = z2
    with pytest.raises(NotPositiveElementError):
        build_rho(s, d, s.e(1), 2)
    with pytest.raises(NotPositiveElementError):
        build_rho(s, d, np.zeros(2), 2)


def test_cyclic_shift_moves_sites():
    a, b, c = np.diag([1.0, 0]), np.diag([0, 1.0]), np.eye(2) / 2
    rho = nc.kron_all([a, b, c])
    assert np.allclose(cyclic_shift(rho, 2, 3), nc.kron_all([c, a, b]))
    assert np.allclose(cyclic_shift(rho, 2, 3, 3), rho)


@pytest.mark.parametrize("name", BICONNECTED)
@pytest.mark.parametrize("weighted", [False, True])
def test_mpo_closure(name, weighted):
    s, d = spec_of(name), elements_of(name)
    for N in range(1, 5):
        assert mpo_closure_residual(s, d, d.Omega, N, weighted) <= 1e-9
    assert mpo_closure_residual(s, d, random_positive(s), 3, weighted) <= 1e-9


def test_z2_tensor_table():
    t = export_mpo_tensor(presets.z2()).tensor
    nz = {tuple(int(i) for i in k): t[k].real for k in zip(*np.nonzero(t))}
    assert nz == {(0, 0, 0, 0): 1, (0, 0, 1, 1): 1, (1, 1, 0, 0): 1, (1, 1, 1, 1): -1}


def test_lee_yang_golden_mpo_tensor():
    """The tabulated 5-dim tensor closes into the coproduct of the Lee-Yang algebra.

    Closing two sites with the boundary |r><l| gives sum_m T[l,m] (x) T[m,r];
    pulled back into the algebra this is Delta of T[l,r].
    """
    s = presets.build_lee_yang()
    T = presets.lee_yang_mpo_tensor()
    R = np.array([[s.pull(T[l, r]) for r in range(5)] for l in range(5)])
    for l in range(5):
        for r in range(5):
            want = sum(np.outer(R[l, m], R[m, r]) for m in range(5))
            assert np.abs(s.delta(R[l, r]) - want).max() <= 1e-12
    # the tensor spans the whole algebra
    assert np.linalg.matrix_rank(R.reshape(25, -1)) == s.n


@pytest.mark.parametrize("name", BICONNECTED)
def test_marginal(name):
    s, d = spec_of(name), elements_of(name)
    res = marginal_check(s, d, d.Omega, 3)
    assert res["residual"] <= 1e-10
    assert res["normalization"] == pytest.approx(1)
    assert res["regenerated_is_xi_inv"] <= 1e-10


def test_budget(lee_yang, monkeypatch):
    s, d = lee_yang
    monkeypatch.setenv("WHA_BUDGET_ENTRIES", str(10**6))
    build_rho(s, d, s.unit, 4)
    with pytest.raises(BudgetExceeded):
        build_rho(s, d, s.unit, 5)
    monkeypatch.delenv("WHA_BUDGET_ENTRIES")
    with pytest.raises(BudgetExceeded):
        build_rho(s, d, s.unit, 6)


def test_dump_round_trip(tmp_path, lee_yang):
    s, d = lee_yang
    rho = build_rho(s, d, d.Omega, 2).rho
    p = tmp_path / "rho.bin"
    write_dump(p, rho, {"label": "rho_2(Omega)"})
    head, data = read_dump(p)
    assert head["shape"] == [25, 25] and head["label"] == "rho_2(Omega)"
    assert np.array_equal(data, rho)
    raw = p.read_bytes()
    body = raw[raw.index(b"\n") + 1 :]
    assert len(body) == 25 * 25 * 16
    assert np.frombuffer(body[:8], "<f8")[0] == rho[0, 0].real
