import numpy as np
import pytest

from conftest import elements_of, random_positive, spec_of
from whampdo import numeric as nc
from whampdo.channels import apply_local, glue_hopf
from whampdo.circuits import (
    CircuitPlan,
    UnsupportedElementError,
    block_sizes,
    maximally_mixed,
    plan_depth_two,
    run_circuit,
    verify_trivial_phase,
)
from whampdo.mpdo import build_rho


def test_block_sizes():
    assert block_sizes(1) == [1]
    assert block_sizes(3) == [3]
    assert block_sizes(4) == [2, 2]
    assert block_sizes(5) == [3, 2]
    assert block_sizes(8) == [2, 2, 2, 2]
    for N in range(1, 20):
        assert sum(block_sizes(N)) == N


def test_plans(z2):
    s, d = z2
    p2 = plan_depth_two(s, d, d.Omega, 2, "Omega")
    assert len(p2.layer1) == 1 and p2.layer2 == []
    p4 = plan_depth_two(s, d, d.Omega, 4, "Omega")
    assert [(a, k) for a, k, _ in p4.layer1] == [(0, 2), (2, 2)]
    assert [a for a, _ in p4.layer2] == [1]
    p5 = plan_depth_two(s, d, d.Omega, 5, "Omega")
    assert [(a, k) for a, k, _ in p5.layer1] == [(0, 3), (3, 2)]
    assert [a for a, _ in p5.layer2] == [2]


def test_x_slot_is_last_junction(h8):
    s, d = h8
    x = random_positive(s)
    plan = plan_depth_two(s, d, x, 8, "x")
    labels = [ch.label for _, ch in plan.layer2]
    assert labels == ["glue_Omega"] * 2 + ["glue_x"]
    assert plan.x_slot == 2


def test_empty_plan_returns_input():
    plan = CircuitPlan(3, 2, [], [], "hopf", "x")
    rho = np.diag(np.arange(8.0)) / 28
    assert np.array_equal(run_circuit(plan, rho), rho)
    with pytest.raises(nc.DimensionError):
        run_circuit(plan, np.eye(4))


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_z2_circuits(z2, N):
    s, d = z2
    res = verify_trivial_phase(s, d, d.Omega, N, "Omega")
    assert res["distance"] <= 1e-9
    assert res["trace"] == pytest.approx(1, abs=1e-9)


def test_z2_random_x(z2):
    s, d = z2
    res = verify_trivial_phase(s, d, random_positive(s), 5, "x")
    assert res["distance"] <= 1e-9


def test_layer_order_matters(z2):
    s, d = z2
    plan = plan_depth_two(s, d, d.Omega, 4, "Omega")
    out = run_circuit(plan, maximally_mixed(2, 4), reverse_layers=True)
    assert nc.trace_distance(out, build_rho(s, d, d.Omega, 4).rho) > 0.1


def test_lee_yang_unit(lee_yang):
    s, d = lee_yang
    res = verify_trivial_phase(s, d, s.unit, 4, "1")
    assert res["distance"] <= 1e-8
    assert res["plan"]["mode"] == "weak-unit"


def test_lee_yang_chihat_is_only_reported(lee_yang):
    s, d = lee_yang
    res = verify_trivial_phase(s, d, d.chihat_trivial(), 4, "chihat1")
    assert res["plan"]["mode"] == "weak-chihat1"
    assert res["notes"]
    assert np.isfinite(res["distance"])


def test_lee_yang_rejects_other_elements(lee_yang):
    s, d = lee_yang
    with pytest.raises(UnsupportedElementError):
        plan_depth_two(s, d, d.Omega, 4)


def test_gluing_associativity(z2):
    s, d = z2
    G = glue_hopf(s, d, d.Omega, "Omega")
    r2 = build_rho(s, d, d.Omega, 2).rho
    r4 = apply_local(np.kron(r2, r2), G, 1, 4, 2)
    left = apply_local(np.kron(r4, r2), G, 3, 6, 2)
    right = apply_local(np.kron(r2, r4), G, 1, 6, 2)
    assert nc.trace_distance(left, right) <= 1e-9
    assert nc.trace_distance(left, build_rho(s, d, d.Omega, 6).rho) <= 1e-9
