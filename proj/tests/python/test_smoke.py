# SPDX-License-Identifier: Apache-2.0
import json

import pytest

sfm = pytest.importorskip("sfm_diamond")


def test_minimize_matches_brute():
    vals = sfm.generate(2, 3, 8, 7)
    assert sfm.is_submodular(2, 3, vals)
    res = sfm.minimize(2, 3, vals, emit_dual=True)
    bm, bt = sfm.brute_min(2, 3, vals)
    assert res["min"] == bm
    assert vals[res["argmin"]] == bm
    assert vals[bt] == bm
    assert "dual" in res


def test_engines_agree():
    vals = sfm.generate(1, 4, 6, 11)
    a = sfm.minimize(1, 4, vals)
    b = sfm.minimize(1, 4, vals, engine="ellipsoid")
    assert a["min"] == b["min"]


def test_greedy_base_on_e1():
    vals = {"0": 0, "a1": 1, "a2": 1, "a3": 1, "1": 1}
    base = sfm.greedy_base(1, 3, vals)
    # sparse map: exactly one nonzero coordinate, with value 1
    assert list(base.values()) == ["1"]


def test_certificate_round_trip():
    vals = sfm.generate(1, 3, 6, 3)
    cert = sfm.certify(1, 3, vals)
    out = sfm.verify(1, 3, vals, cert)
    assert out["accept"]

    bad = json.loads(cert)
    bad["claimed_min"] -= 1
    out2 = sfm.verify(1, 3, vals, json.dumps(bad))
    assert not out2["accept"]
    assert out2["failed_check"] == 5


def test_bad_input_raises():
    with pytest.raises(sfm.SfmError):
        sfm.minimize(1, 3, {"0": 0})  # missing tuples
    with pytest.raises(sfm.SfmError):
        sfm.verify(1, 3, sfm.generate(1, 3, 6, 1), "not json")
