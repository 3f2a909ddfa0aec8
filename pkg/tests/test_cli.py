import csv
import io
import json

import numpy as np
import pytest

from hedrop.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main
from hedrop.config import ConfigError, RunConfig, load_config, parse_config_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_config_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# drop\nisotope = He3\nradius = 2e-3  # m\ninput-power = 1e-5\n")
    cfg = load_config(path, temperature=0.2)
    assert cfg.isotope.value == "He3" and cfg.radius == 2e-3 and cfg.temperature == 0.2
    assert cfg.input_power == 1e-5


@pytest.mark.parametrize("text", ["colour = red\n", "radius\n", "radius = big\n"])
def test_config_rejects(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_config_validation():
    with pytest.raises(ConfigError):
        load_config(radius=-1.0)
    with pytest.raises(ValueError):
        RunConfig(format="xml")


def test_props_json(capsys):
    code, out, _ = run(capsys, "props", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["properties"]["density"]["value"] == 145.0


def test_spectrum_rows(capsys):
    code, out, _ = run(capsys, "spectrum", "--l-max", "10", "--n-max", "3")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 1 + 42
    assert rows[0] == ["branch", "n", "l", "omega_rad_s", "f_Hz"]


def test_qfactors_dominant(capsys):
    code, out, _ = run(capsys, "qfactors", "--format", "json")
    assert json.loads(out)["dominant_optical_channel"] == "surface"


def test_couplings(capsys):
    code, out, _ = run(capsys, "couplings", "--format", "json", "--m-tilde", "0")
    rep = json.loads(out)
    assert rep["g0_exceeds_omega_vib"] and rep["general"]["g_rad_s"] < 0


def test_cool_he3(capsys):
    code, out, _ = run(capsys, "cool", "--isotope", "He3", "--t-end", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[-1]["t_s"]) == 1.0
    assert float(rows[-1]["T_K"]) == pytest.approx(0.2, rel=0.15)


def test_qnd_usage_errors(capsys):
    assert run(capsys, "qnd")[0] == EXIT_USAGE
    assert run(capsys, "qnd", "--omega-z", "1", "--L-z", "1e20")[0] == EXIT_USAGE
    assert run(capsys, "qnd", "--omega-z", "1", "--input-power", "0")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as err:
        main(["qnd", "--bogus"])
    assert err.value.code == EXIT_USAGE


def test_qnd_he3(capsys):
    code, out, _ = run(capsys, "qnd", "--isotope", "He3", "--temperature", "0.13", "--omega-z", str(2 * np.pi))
    rep = json.loads(out)
    assert rep["sqrt_S_L_hbar_per_rtHz"] == pytest.approx(3e7, rel=0.2)
    assert all(rep["noise_below_imprecision"].values())


def test_missing_data_dir(capsys, tmp_path):
    code, _, err = run(capsys, "props", "--data-dir", str(tmp_path))
    assert code == EXIT_DATA and "he4_vapor_pressure.csv" in err


def test_bad_table(capsys, tmp_path):
    for name in ("vapor_pressure", "latent_heat", "specific_heat"):
        (tmp_path / f"he4_{name}.csv").write_text("T_K,value\n1.0,oops\n")
    code, _, err = run(capsys, "props", "--data-dir", str(tmp_path))
    assert code == EXIT_DATA


def test_out_of_range_is_validation(capsys):
    code, _, _ = run(capsys, "props", "--temperature", "50")
    assert code == EXIT_VALIDATION


def test_rovib_constraint_violation(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"euler": [0, 1, 0], "X": [[0, 0], [0.01, 0], [0, 0], [0.02, 0], [0, 0]]}))
    code, _, err = run(capsys, "rovib", "--initial", str(path), "--t-end", "1")
    assert code == EXIT_VALIDATION and "index 1" in err


def test_rovib_zero_state(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"euler": [0, 0, 0], "X": [[0, 0]] * 5}))
    out = tmp_path / "traj.csv"
    code, _, _ = run(capsys, "rovib", "--initial", str(path), "--t-end", "1", "--samples", "3", "--out", str(out))
    assert code == EXIT_OK
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert np.all(data[:, 1:] == 0)
    summary = json.loads((tmp_path / "traj.csv.summary.json").read_text())
    assert summary["max_energy_drift"] == 0.0


def test_csv_roundtrip_full_precision(capsys, tmp_path):
    out = tmp_path / "fig"
    assert main(["figures", "--out", str(out)]) == EXIT_OK
    text = (out / "fig3.csv").read_text()
    rows = list(csv.reader(io.StringIO(text)))
    values = np.array(rows[1:], dtype=float)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0])
    for r in values:
        w.writerow([repr(float(v)) for v in r])
    assert buf.getvalue() == text
