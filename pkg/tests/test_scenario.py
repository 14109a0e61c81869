import dataclasses
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as hst

from ppcat import scenario as sc
from ppcat import wigner as wg
from ppcat.errors import ValidationError

finite = hst.floats(-1e6, 1e6, allow_nan=False)


@pytest.mark.parametrize(
    "text, value",
    [
        ("sqrt12@pi/3", math.sqrt(12) * np.exp(1j * math.pi / 3)),
        ("sqrt(2)@-pi/4", math.sqrt(2) * np.exp(-1j * math.pi / 4)),
        ("2@0.5", 2 * np.exp(0.5j)),
        ("3@2pi/3", 3 * np.exp(2j * math.pi / 3)),
        ("1+2i", 1 + 2j),
        ("-0.5i", -0.5j),
        ("sqrt12", math.sqrt(12)),
        ("0", 0),
        (1.5, 1.5),
    ],
)
def test_parse_amplitude(text, value):
    assert sc.parse_amplitude(text) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["abc", "sqrt@pi", "1@pie", ""])
def test_parse_amplitude_rejects(text):
    with pytest.raises(ValidationError):
        sc.parse_amplitude(text)


@given(finite, finite)
def test_amplitude_format_round_trip(re, im):
    a = complex(re, im)
    assert sc.parse_amplitude(sc.format_amplitude(a)) == a


def test_scenario_validation():
    with pytest.raises(ValidationError):
        sc.Scenario(mode="mode2")
    with pytest.raises(ValidationError):
        sc.Scenario(method="euler")
    with pytest.raises(ValidationError):
        sc.Scenario(outputs=("png",))
    with pytest.raises(ValidationError):
        sc.Scenario(case=None, state1="cat")
    with pytest.raises(ValidationError):
        sc.Scenario(case="V", method="fock", alpha1="sqrt12")
    assert sc.Scenario(case="V", method="fock", alpha1="sqrt12", force=True).method == "fock"
    custom = sc.Scenario(case=None, state1="cat", state3="coherent", alpha1=1, alpha3=1j)
    assert custom.two_mode_input().mode1.kind.value == "cat"
    with pytest.raises(ValidationError):
        sc.Scenario.from_mapping({"colour": "red"})


def test_vacuum_run(tmp_path):
    rec = sc.run_scenario(sc.Scenario(case="IV", zeta=0.0), tmp_path)
    for m in rec["fields"].values():
        assert abs(m["negativity_volume"]) < 1e-12
        assert m["normalization_defect"] < 1e-3
        assert m["fringe_visibility"] is None
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [
        "caseIV_z0_g0.9_metrics.json",
        "caseIV_z0_g0.9_mode1.csv",
        "caseIV_z0_g0.9_mode1.pgm",
        "caseIV_z0_g0.9_mode3.csv",
        "caseIV_z0_g0.9_mode3.pgm",
    ]
    saved = json.loads((tmp_path / "caseIV_z0_g0.9_metrics.json").read_text())
    assert set(saved["fields"]["mode1"]) >= {
        "negativity_volume", "fringe_visibility", "normalization_defect", "min", "max", "argmin", "argmax",
    }


def test_grid_file_round_trip_and_format(tmp_path):
    s = sc.Scenario(case="V", zeta=0.4, gamma=0.7, alpha1="sqrt2@pi/5", mode="mode3", grid=wg.PhaseSpaceGrid(-5, 5, -4, 4, 40, 30))
    sc.run_scenario(s, tmp_path)
    path = tmp_path / f"{s.stem()}_mode3.csv"
    lines = path.read_text().splitlines()
    assert lines[0] == "# convention: alpha=x+ip, integral dx dp"
    assert lines[1] == "# x: -5 5 40"
    assert lines[2] == "# p: -4 4 30"
    w = sc.read_grid_csv(path)
    ref = sc.compute_fields(s)["mode3"]
    assert np.array_equal(w.values, ref.values)
    assert w.grid == ref.grid
    img = sc.read_pgm(tmp_path / f"{s.stem()}_mode3.pgm")
    assert img.shape == (30, 40)
    assert img.min() == 0 and img.max() == 255


def test_pgm_orientation(tmp_path):
    grid = wg.PhaseSpaceGrid(nx=16, ny=20)
    v = np.zeros((16, 20))
    v[15, 19] = 1.0  # x max, p max -> top right
    sc.write_pgm(tmp_path / "a.pgm", wg.WignerField(grid, v, "mode1"))
    img = sc.read_pgm(tmp_path / "a.pgm")
    assert img[0, -1] == 255 and img.sum() == 255


def test_deterministic_outputs(tmp_path):
    s = sc.Scenario(case="IX", zeta=0.9, gamma=0.9, alpha1="sqrt2@pi/3", alpha3="sqrt2@pi/3", grid=wg.PhaseSpaceGrid(nx=64, ny=64))
    sc.run_scenario(s, tmp_path / "a")
    sc.run_scenario(s, tmp_path / "b")
    for p in sorted((tmp_path / "a").iterdir()):
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()


def test_fock_method_runs():
    s = sc.Scenario(case="V", zeta=0.3, gamma=0.9, alpha1="sqrt0.5@pi/3", grid=wg.PhaseSpaceGrid.square(3.0, 32), method="fock")
    fock = sc.compute_fields(s)
    ref = sc.compute_fields(dataclasses.replace(s, method="gaussian"))
    for mode in wg.MODES:
        assert np.max(np.abs(fock[mode].values - ref[mode].values)) < 1e-4


def test_sweep_rows(tmp_path):
    s = sc.Scenario(case="VI", zeta=1.2, alpha3="sqrt12@pi/3", mode="mode3", grid=wg.PhaseSpaceGrid.square(10.0, 128))
    rows = sc.run_sweep(s, "gamma", [0.5, 0.9], tmp_path)
    assert [r["gamma"] for r in rows] == [0.5, 0.9]
    assert rows[0]["fringe_visibility"] != rows[1]["fringe_visibility"]
    table = (tmp_path / f"{s.stem()}_sweep_gamma.csv").read_text().splitlines()
    assert len(table) == 3
    one = sc.run_sweep(s, "gamma", [0.5])[0]
    direct = sc.run_scenario(dataclasses.replace(s, gamma=0.5))["fields"]["mode3"]
    for key in ("negativity_volume", "fringe_visibility", "normalization_defect", "min", "max"):
        assert one[key] == direct[key]
    with pytest.raises(ValidationError):
        sc.run_sweep(s, "gamma", [])
    with pytest.raises(ValidationError):
        sc.run_sweep(s, "phi2", [0.1])


def test_errors_carry_context():
    s = sc.Scenario(case="IV", beta_extent=2.0, method="transform")
    with pytest.raises(Exception) as err:
        sc.run_scenario(s)
    assert s.stem() in str(err.value)


def test_config_file(tmp_path):
    cfg = tmp_path / "s.toml"
    cfg.write_text('case = "V"\nalpha1 = "sqrt12@pi/3"\nzeta = 0.9\ngamma = 0.9\nrange = [-8.0, 8.0, -7.0, 7.0]\ngrid = [64, 48]\n')
    s = sc.Scenario.from_mapping(sc.load_config(cfg))
    assert s.grid == wg.PhaseSpaceGrid(-8, 8, -7, 7, 64, 48)
    assert s.alpha1 == pytest.approx(math.sqrt(12) * np.exp(1j * math.pi / 3))
    bad = tmp_path / "bad.toml"
    bad.write_text("case = \n")
    with pytest.raises(ValidationError):
        sc.load_config(bad)


def test_shipped_scenarios_match_captions():
    import pathlib

    root = pathlib.Path(__file__).resolve().parents[1] / "scenarios"
    expect = {
        "fig1a": ("V", "mode1", 0.9, 0.9), "fig1b": ("V", "mode3", 0.9, 0.9),
        "fig2a": ("IX", "mode1", 0.9, 0.9), "fig2b": ("IX", "mode3", 0.9, 0.9),
        "fig3a": ("VI", "mode3", 1.2, 0.9), "fig3b": ("VI", "mode3", 1.2, 0.5),
    }
    assert sorted(p.stem for p in root.glob("*.toml")) == sorted(expect)
    cat = math.sqrt(12) * np.exp(1j * math.pi / 3)
    for name, (case, mode, z, g) in expect.items():
        s = sc.Scenario.from_mapping(sc.load_config(root / f"{name}.toml"))
        assert (s.case, s.mode, s.zeta, s.gamma, s.phi2) == (case, mode, z, g, 0.0)
        if case in ("V", "IX"):
            assert s.alpha1 == pytest.approx(cat)
        if case in ("VI", "IX"):
            assert s.alpha3 == pytest.approx(cat)
