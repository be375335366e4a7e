import numpy as np
import pytest

from conftest import BICONNECTED, HOPF_PRESETS, elements_of, spec_of
from whampdo.axioms import delta_power
from whampdo.distinguished import NotHopfError, hopf_specialization_report
from whampdo.identities import counital_identities, core_identities, hopf_identities, identity_suite
from whampdo.structure import center


@pytest.mark.parametrize("name", BICONNECTED)
def test_identity_suite(name):
    res = identity_suite(elements_of(name))
    assert len(res) > 40
    bad = {k: v for k, v in res.items() if not v <= 1e-9}
    assert not bad


def test_hopf_only_identities_are_added():
    assert set(hopf_identities(elements_of("h8"))) <= set(identity_suite(elements_of("h8")))
    assert "mu_x(1) = D2 omega(x)" not in identity_suite(elements_of("lee_yang"))


def test_core_and_counital_split():
    d = elements_of("lee_yang")
    assert not set(core_identities(d)) & set(counital_identities(d))


def test_mid_slice_fails_on_weak_example():
    s, d = spec_of("lee_yang"), elements_of("lee_yang")
    worst = 0.0
    for i in range(s.n):
        x = s.e(i)
        mid = np.einsum("abc,b->ac", delta_power(s, x, 2), d.omega)
        worst = max(worst, np.abs(mid - d.omega_of(x) * np.outer(s.unit, s.unit)).max())
    assert worst > 1e-3


def test_hopf_report_refuses_weak():
    with pytest.raises(NotHopfError):
        hopf_specialization_report(spec_of("lee_yang"), elements_of("lee_yang"))


@pytest.mark.parametrize("name", HOPF_PRESETS)
def test_hopf_specialization(name):
    rep = hopf_specialization_report(spec_of(name), elements_of(name))
    assert max(rep.values()) <= 1e-10


@pytest.mark.parametrize("name", ["s3", "lee_yang"])
def test_omega_uniqueness(name):
    """Other faithful positive trace-like functionals are never idempotent."""
    s, d = spec_of(name), elements_of(name)
    Z = center(s)
    rng = np.random.default_rng(3)
    hits = 0
    for _ in range(20):
        z = Z @ (rng.standard_normal(Z.shape[1]))
        c = s.mul(s.adj(z), z) + 0.01 * s.unit
        f = np.einsum("ab,iba->i", s.phi(c), s.rep)
        # rescale so that f(Omega) matches omega(Omega); idempotence then pins f down
        f = f * d.omega_of(d.Omega) / (f @ d.Omega)
        if np.abs(s.fmul(f, f) - f).max() <= 1e-8:
            hits += 1
            assert np.abs(f - d.omega).max() <= 1e-8
    assert hits == 0
    assert np.abs(s.fmul(d.omega, d.omega) - d.omega).max() <= 1e-12
