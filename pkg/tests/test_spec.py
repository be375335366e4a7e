import json

import numpy as np
import pytest

from whampdo import presets
from whampdo.spec import SpecError, canonical_json, load_spec, save_spec, spec_from_dict, spec_to_dict


@pytest.mark.parametrize("name", sorted(presets.PRESETS))
def test_round_trip(name, tmp_path):
    s = presets.preset(name)
    back = spec_from_dict(json.loads(json.dumps(spec_to_dict(s))))
    for attr in ("mult", "coproduct", "unit", "counit", "star", "antipode", "rep"):
        assert np.allclose(getattr(s, attr), getattr(back, attr), atol=0)
    p = tmp_path / f"{name}.json"
    save_spec(s, p)
    assert load_spec(p).fingerprint == s.fingerprint
    assert canonical_json(load_spec(p)) == canonical_json(s)


def test_shipped_presets_match_builders():
    from pathlib import Path

    root = Path(__file__).resolve().parent.parent / "presets"
    for name in ("z2", "s3", "h8", "lee_yang"):
        assert load_spec(root / f"{name}.json").fingerprint == presets.preset(name).fingerprint


def test_corrupted_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(SpecError):
        load_spec(bad)
    d = spec_to_dict(presets.z2())
    d.pop("mult")
    bad.write_text(json.dumps(d))
    with pytest.raises(SpecError):
        load_spec(bad)
    with pytest.raises(FileNotFoundError):
        load_spec(tmp_path / "missing.json")


def test_basic_operations_z2():
    s = presets.z2()
    e, g = s.e(0), s.e(1)
    assert np.allclose(s.mul(g, g), e)
    assert np.allclose(s.delta(g), np.outer(g, g))
    assert s.eps(g) == 1
    assert np.allclose(s.S(g), g)
    assert np.allclose(s.phi(g), np.diag([1, -1]))


def test_h8_relations():
    s = presets.build_kac_paljutkin()
    assert s.n == 8
    x, y, z = (s.e(s.index(lab)) for lab in ("x", "y", "z"))
    u = s.unit
    assert np.allclose(s.mul(x, x), u) and np.allclose(s.mul(y, y), u)
    assert np.allclose(s.mul(x, y), s.mul(y, x))
    assert np.allclose(s.mul(z, x), s.mul(y, z))
    z2 = s.mul(z, z)
    assert np.allclose(z2, 0.5 * (u + x + y - s.mul(x, y)))


def test_lee_yang_table():
    s = presets.build_lee_yang()
    z = presets.lee_yang_zeta()
    assert abs(z**4 + z**2 - 1) < 1e-15
    i = s.index
    assert s.n == 13 and s.rep_dim == 5
    assert abs(s.eps(s.unit) - 2) < 1e-15
    C = s.coproduct
    assert C[i("e1_22"), i("e2_22"), i("e2_11")] == pytest.approx(z**4)
    assert C[i("e2_33"), i("e2_23"), i("e2_13")] == pytest.approx(-(z**3))
    assert C[i("e2_22"), i("e2_33"), i("e2_22")] == 1
    assert C[i("e2_13"), i("e2_13"), i("e1_22")] == 1
    assert C[i("e2_23"), i("e2_23"), i("e1_12")] == 1
    # transposed generators follow from *-comultiplicativity
    assert C[i("e1_21"), i("e2_21"), i("e2_12")] == pytest.approx(z**2)
    # antipode on the three-dimensional block
    assert s.antipode[i("e2_22"), i("e2_11")] == pytest.approx(1.0)
    assert s.antipode[i("e2_12"), i("e2_12")] == pytest.approx(z**-2)
