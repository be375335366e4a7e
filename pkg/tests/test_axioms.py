import numpy as np
import pytest

from whampdo import presets
from whampdo.axioms import BudgetExceeded, budget_entries, check_budget, delta_power, delta_power_right, validate_axioms
from whampdo.spec import WhaSpec


@pytest.mark.parametrize("name", ["trivial", "z2", "z2_functions", "s3", "h8", "lee_yang"])
def test_presets_are_weak_hopf(name):
    rep = validate_axioms(presets.preset(name))
    assert rep.is_weak_hopf
    assert rep.max_residual() <= 1e-10
    assert rep.is_hopf == (name != "lee_yang")


def test_lee_yang_is_not_hopf():
    rep = validate_axioms(presets.build_lee_yang())
    assert rep.hopf_residuals["hopf_unit"] > 0.1


def test_wrong_antipode_is_detected():
    s = presets.build_kac_paljutkin()
    bad = WhaSpec(s.basis, s.mult, s.unit, s.star, s.coproduct, s.counit, np.eye(s.n), s.rep, name="h8-bad")
    rep = validate_axioms(bad)
    assert not rep.is_weak_hopf
    assert max(rep.residuals["antipode_target"], rep.residuals["antipode_source"]) > 0.1


@pytest.mark.parametrize("name", ["h8", "lee_yang"])
def test_bracketings_agree(name):
    s = presets.preset(name)
    x = np.random.default_rng(0).standard_normal(s.n)
    for k in (1, 2, 3):
        assert np.abs(delta_power(s, x, k) - delta_power_right(s, x, k)).max() <= 1e-12


def test_budget(monkeypatch):
    monkeypatch.setenv("WHA_BUDGET_ENTRIES", "100")
    assert budget_entries() == 100
    with pytest.raises(BudgetExceeded):
        check_budget(101, "test")
    monkeypatch.setenv("WHA_BUDGET_ENTRIES", "lots")
    with pytest.raises(ValueError):
        budget_entries()
    monkeypatch.delenv("WHA_BUDGET_ENTRIES")
    assert budget_entries() == 20_000_000
