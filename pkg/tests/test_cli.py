import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from noncyclic.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_json(tmp_path, name, doc):
    f = tmp_path / name
    f.write_text(json.dumps(doc))
    return str(f)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sign_change_csv(tmp_path, capsys):
    sc = write_json(tmp_path, "s.json", {"name": "conical-sign-change", "config": {"n_points": 40}})
    code, out, _ = run(["--scenario", sc], capsys)
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 40
    for r in rows:
        g, phi = float(r["gamma_wrapped"]), float(r["phi_f"])
        assert abs(g - (0.0 if phi < np.pi else np.pi)) < 1e-9


def test_registered_name_runs_defaults(capsys):
    code, out, _ = run(["--scenario", "geodesic-closure", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["phase_plus"] == pytest.approx(-np.pi / 4)
    assert doc["gamma_line_integral"] == pytest.approx(-np.pi / 4)


def test_ab_sweep_subcommand(capsys):
    code, out, _ = run(["ab-sweep", "--eta", "0.3", "--steps", "100"], capsys)
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 101
    assert float(rows[0]["gamma_unwrapped"]) == pytest.approx(0.0, abs=1e-12)
    assert float(rows[-1]["gamma_unwrapped"]) == pytest.approx(2 * np.pi * 0.3, abs=1e-9)
    assert {r["regime"] for r in rows} == {"a", "b", "c"}


def test_spin_experiment_subcommand(capsys):
    code, out, _ = run(["spin-experiment", "--path", "equator-quarter", "--theta0", "1.0", "--t", "60",
                        "--no-oracle", "--verbose", "--shots", "100", "--seed", "3"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert {"p_z_analytic", "p_z_oracle", "f", "gamma", "gamma_mod_pi_class", "p_z_measured",
            "p_z_printed_form"} <= set(doc)
    assert doc["p_z_oracle"] is None


def test_out_file(tmp_path, capsys):
    target = tmp_path / "o.csv"
    code, out, _ = run(["ab-sweep", "--steps", "8", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert len(read_csv(target.read_text())) == 9


def test_malformed_path_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "p.json"
    bad.write_text('{"samples": [{"t": 0}]}')
    sc = write_json(tmp_path, "s.json", {"name": "custom", "config": {"path": str(bad)}})
    code, out, err = run(["--scenario", sc], capsys)
    assert code == 2 and out == ""
    assert "SchemaError" in err


@pytest.mark.parametrize("doc", [{"config": {}}, {"name": "ab-sweep", "extra": 1},
                                 {"name": "ab-sweep", "config": {"bogus": 1}},
                                 {"name": "ab-sweep", "config": {"eta": "x"}},
                                 {"name": "nope"}])
def test_bad_scenarios_exit_2(tmp_path, capsys, doc):
    code, _, _ = run(["--scenario", write_json(tmp_path, "s.json", doc)], capsys)
    assert code == 2


def test_undefined_phase_exits_3(tmp_path, capsys):
    sc = write_json(tmp_path, "s.json", {"name": "conical-sign-change",
                                         "config": {"phi_values": [np.pi], "method": "numeric"}})
    code, _, err = run(["--scenario", sc], capsys)
    assert code == 3
    assert "UndefinedPhaseError" in err


def test_antipodal_exits_5(tmp_path, capsys):
    n = 200
    samples = [{"t": float(i), "R": [np.pi / 2, float(p)]} for i, p in enumerate(np.linspace(0, np.pi, n))]
    path = write_json(tmp_path, "p.json", {"closed": False, "samples": samples})
    sc = write_json(tmp_path, "s.json", {"name": "geodesic-closure", "config": {"path": path}})
    code, _, err = run(["--scenario", sc], capsys)
    assert code == 5
    assert "AntipodalError" in err


def test_duration_sweep_converges(capsys):
    code, out, _ = run(["--scenario", "oracle-convergence", "--sweep-axis", "duration",
                        "--sweep-values", "50,150,450"], capsys)
    assert code == 0
    rows = read_csv(out)
    assert [float(r["duration"]) for r in rows] == [50, 150, 450]
    gaps = [float(r["gap"]) for r in rows]
    assert gaps[0] > gaps[1] > gaps[2]


def test_eta_sweep_plateau(capsys):
    code, out, _ = run(["--scenario", "ab-sweep", "--sweep-axis", "eta", "--sweep-values", "0.1,0.3,0.7",
                        "--format", "json"], capsys)
    assert code == 0
    rows = json.loads(out)
    for r in rows:
        # the phase winds the short way round: 2 pi eta up to a multiple of 2 pi
        expected = 2 * np.pi * (r["eta"] - round(r["eta"]))
        assert r["gamma_unwrapped_end"] == pytest.approx(expected, abs=1e-9)
        assert r["max_abs_gamma_case_a"] < 1e-9


def test_eta_sweep_plateau_through_half_flux(capsys):
    code, out, _ = run(["--scenario", "ab-sweep", "--sweep-axis", "eta", "--sweep-values", "0,0.3,0.5"], capsys)
    assert code == 0
    rows = read_csv(out)
    for r in rows:
        assert float(r["gamma_unwrapped_end"]) == pytest.approx(2 * np.pi * float(r["eta"]), abs=1e-9)


def test_empty_sweep(capsys):
    code, out, _ = run(["--scenario", "ab-sweep", "--sweep-axis", "eta", "--sweep-values", ""], capsys)
    assert code == 0 and out == ""


def test_unknown_sweep_axis(capsys):
    code, _, _ = run(["--scenario", "ab-sweep", "--sweep-axis", "zeta", "--sweep-values", "1"], capsys)
    assert code == 2


def test_reruns_are_byte_identical(capsys):
    argv = ["spin-experiment", "--path", "equator-quarter", "--theta0", "1.0", "--t", "30",
            "--shots", "500", "--seed", "11"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_parallel_sweep_keeps_order(capsys):
    argv = ["--scenario", "ab-sweep", "--sweep-axis", "eta", "--sweep-values", "0.7,0.1,0.4,0.2"]
    serial = run(argv, capsys)[1]
    parallel = run(argv + ["--jobs", "2"], capsys)[1]
    assert serial == parallel
    assert [float(r["eta"]) for r in read_csv(parallel)] == [0.7, 0.1, 0.4, 0.2]


def test_scenario_sweep_block(tmp_path, capsys):
    sc = write_json(tmp_path, "s.json", {"name": "ab-sweep", "config": {"steps": 50},
                                         "sweep": {"axis": "eta", "values": [0.2, 0.6]},
                                         "output": {"format": "json"}})
    code, out, _ = run(["--scenario", sc], capsys)
    assert code == 0
    assert [r["eta"] for r in json.loads(out)] == [0.2, 0.6]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "noncyclic", "ab-sweep", "--steps", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "theta,regime,gamma_wrapped,gamma_unwrapped,overlap_abs"
