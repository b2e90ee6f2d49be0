import math

import numpy as np
import pytest

import ecavdg


def test_presets_round_trip():
    names = ecavdg.preset_names()
    assert "vortex" in names and "shu-osher" in names
    for name in names:
        cfg = ecavdg.Config.preset(name)
        assert ecavdg.Config.from_ini(cfg.to_ini()) == cfg


def test_bad_config_raises():
    with pytest.raises(ecavdg.ConfigError):
        ecavdg.Config.from_ini("[problem]\nproblem=sod\n")


def test_short_contact_run():
    cfg = ecavdg.Config.preset("contact")
    cfg.K = 20
    cfg.t_final = 0.01
    res = ecavdg.run(cfg)
    assert res["completed"]
    assert res["violations"] == []
    assert res["l2_error"] < 1e-12
    assert len(res["samples"]["t"]) >= 2


def test_density_wave_ecav_run():
    cfg = ecavdg.Config.preset("density-wave")
    cfg.N = 2
    cfg.K = 8
    cfg.t_final = 0.1
    res = ecavdg.run(cfg)
    assert res["completed"]
    assert res["max_entropy_rate"] <= 1e-10
    assert all(r >= 1 - 1e-10 for r in res["samples"]["r_min"] if not math.isnan(r))


def test_reference_element_is_orthonormal():
    ref = ecavdg.reference_element("triangle", 3)
    assert np.allclose(ref["M"], np.eye(10), atol=1e-12)
    assert np.isclose(ref["weights"].sum(), 2.0)


def test_ecav_coefficient_and_schlieren():
    assert ecavdg.ecav_coefficient(-2.0, 4.0, "absolute", 1.0) == pytest.approx(8.0 / 17.0)
    assert ecavdg.ecav_coefficient(1.0, 4.0) == 0.0
    s = ecavdg.schlieren_values([0.0, 1.0])
    assert s[0] == pytest.approx(1.0) and s[1] == pytest.approx(math.exp(-10.0))


def test_entropy_variables():
    gamma = 1.4
    rho, u, p = 1.2, 0.3, 0.9
    E = p / (gamma - 1) + 0.5 * rho * u * u
    v = ecavdg.entropy_variables(np.array([rho, rho * u, E]), gamma)
    rhoe = p / (gamma - 1)
    assert v[2] == pytest.approx(-rho / rhoe)
    with pytest.raises(ecavdg.AdmissibilityError):
        ecavdg.entropy_variables(np.array([-1.0, 0.0, 1.0]))


def test_lemma_suite():
    rep = ecavdg.check_lemmas(seed=3, trials=24)
    assert rep["passed"], rep["report"]
