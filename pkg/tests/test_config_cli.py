import json
import os

import pytest

from dotci import cli, io
from dotci.config import parse_config
from dotci.errors import ConfigError

FAST = """
[model]
n_shells = 2
eps_r = 30
gap_offset = 910 meV

[field]
field = 1.5 kV/cm
start = 0 kV/cm
end = 2 kV/cm
n_points = 3

[crossing]
lo = 0
hi = 8 kV/cm

[spectrum]
gamma = 50, 100 ueV
"""


def test_defaults():
    cfg = parse_config("")
    assert cfg["electron", "hbar_omega"] == 12.0 and cfg["hole", "mass_ratio"] == 0.11
    assert cfg["model", "n_shells"] == 3 and cfg["model", "delta1_0"] == 108.0
    assert cfg.gammas == [50.0]
    m = cfg.model()
    assert m.electron.length == pytest.approx(m.hole.length)


def test_units_and_lists():
    cfg = parse_config(FAST)
    assert cfg["field", "field"] == 1.5 and cfg.gammas == [50.0, 100.0]
    assert cfg["model", "gap_offset"] == 910.0
    assert parse_config("[model]\ndelta1_0 = 108 µeV\n")["model", "delta1_0"] == 108.0


@pytest.mark.parametrize("text,key,line", [
    ("[model]\neps_r = -3\n", "eps_r", 2),
    ("[model]\n\nn_shells = 0\n", "n_shells", 3),
    ("[electron]\nhbar_omega = twelve\n", "hbar_omega", 2),
    ("[electron]\nhbar_omega = 12 kV/cm\n", "hbar_omega", 2),
    ("[model]\nbogus = 1\n", "bogus", 2),
    ("[field]\nstart = 4\nend = 1\n", "end", 3),
    ("[spectrum]\ngamma = 50, -1\n", "gamma", 2),
    ("[model]\nexchange_scaling = cubic\n", "exchange_scaling", 2),
])
def test_errors_name_key_and_line(text, key, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key == key and info.value.line == line
    assert repr(key) in str(info.value)


def test_unknown_section():
    with pytest.raises(ConfigError) as info:
        parse_config("[magnet]\nb = 1\n")
    assert info.value.line == 1


def test_echo_round_trip():
    cfg = parse_config(FAST)
    echo = cfg.echo()
    assert "gamma = 50, 100 ueV" in echo and "field = 1.5 kV/cm" in echo
    again = parse_config(echo)
    assert again.values == cfg.values
    assert again.echo() == echo


def test_fmt():
    assert io.fmt(-0.0) == "0" and io.fmt(3) == "3" and io.fmt(1 / 3) == "0.333333333"


@pytest.fixture
def fast_cfg(tmp_path):
    p = tmp_path / "run.ini"
    p.write_text(FAST)
    return str(p)


def test_cli_spectrum(fast_cfg, tmp_path):
    out = tmp_path / "s"
    assert cli.main(["spectrum", "--config", fast_cfg, "--out", str(out)]) == 0
    rows = io.read_csv(out / "lines.csv")
    assert list(rows[0]) == cli.LINE_COLUMNS
    labels = {r["label"] for r in rows}
    assert {"X1", "X2", "XX_A1", "XX_B1"} <= labels
    x1 = next(r for r in rows if r["label"] == "X1")
    assert x1["polarization"] == "V" and 915 < float(x1["photon_energy_meV"]) < 930
    spec = io.read_csv(out / "spectrum.csv")
    assert list(spec[0]) == ["energy_meV", "intensity"]
    assert (out / "effective_config.ini").exists()


def test_cli_deterministic(fast_cfg, tmp_path):
    for d in ("a", "b"):
        assert cli.main(["spectrum", "--config", fast_cfg, "--out", str(tmp_path / d), "--field", "0.5"]) == 0
    for name in ("lines.csv", "spectrum.csv", "effective_config.ini"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_sweep_and_cascade(fast_cfg, tmp_path):
    out = tmp_path / "w"
    assert cli.main(["sweep", "--config", fast_cfg, "--out", str(out)]) == 0
    rows = io.read_csv(out / "sweep.csv")
    assert len(rows) == 3 and list(rows[0]) == cli.SWEEP_COLUMNS
    fit = json.loads((out / "sweep_fit.json").read_text())
    assert set(fit) == {"sp_fit", "stark"}
    assert cli.main(["cascade-report", "--config", fast_cfg, "--out", str(out)]) == 0
    crows = io.read_csv(out / "cascade.csv")
    assert "overlap_A1B2_g100" in crows[0]
    for c, r in zip(crows, rows):
        assert float(c["delta_A1B2_ueV"]) == pytest.approx(-float(r["binding_ueV"]), abs=1e-4)


def test_cli_find_crossing(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text(FAST.replace("lo = 0", "lo = 2 kV/cm").replace("hi = 8 kV/cm", "hi = 5 kV/cm"))
    assert cli.main(["find-crossing", "--config", str(p), "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "crossing.json").read_text())
    assert abs(res["binding_residual_ueV"]) <= 1.0 and 2 < res["F_star"] < 5


def test_cli_no_crossing(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text(FAST.replace("hi = 8 kV/cm", "hi = 0.5 kV/cm"))
    assert cli.main(["find-crossing", "--config", str(p), "--out", str(tmp_path)]) == 4
    assert not (tmp_path / "crossing.json").exists()


def test_cli_config_errors(tmp_path, capsys):
    p = tmp_path / "bad.ini"
    p.write_text("[model]\neps_r = -1\n")
    assert cli.main(["sweep", "--config", str(p)]) == 2
    assert "eps_r" in capsys.readouterr().err
    assert cli.main(["sweep", "--config", str(tmp_path / "missing.ini")]) == 2


def test_cli_hidden_symmetry_config(tmp_path):
    here = os.path.dirname(__file__)
    cfg = os.path.join(here, "..", "configs", "hidden_symmetry.ini")
    assert cli.main(["find-crossing", "--config", cfg, "--out", str(tmp_path)]) == 0
    res = json.loads((tmp_path / "crossing.json").read_text())
    assert res["F_star"] == 0.0 and res["iterations"] == 0
