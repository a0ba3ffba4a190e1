import csv
import io
import json
import math
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from magtunnel.cli import RunConfig, UsageError, main
from magtunnel.units import PhysicalParams, wkb_action

from conftest import F_RES, P_RES, QUARTIC


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    return list(csv.reader(io.StringIO(text)))


def test_resonance_csv(capsys):
    code, out, err = run(capsys, "resonance")
    assert code == 0 and err == ""
    doc = dict(table(out)[1:])
    assert float(doc["p_R"]) == pytest.approx(P_RES, abs=1e-10)
    assert float(doc["f_at_resonance"]) == pytest.approx(F_RES, rel=1e-12)
    assert 10.0 < float(doc["H_R"]) < 10.5
    assert table(out)[0] == ["key", "value"]


def test_resonance_json(capsys):
    code, out, _ = run(capsys, "resonance", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["family"] == "quartic"
    assert doc["reference_field_coefficient"] == 0.43


def test_resonance_without_well_exits_2(capsys):
    code, out, err = run(capsys, "resonance", "--family", "cosine")
    assert code == 2 and out == "" and "NoResonance" in err


def test_scan_contract(capsys):
    length = 3 * 140.0 * F_RES
    code, out, _ = run(capsys, "scan", "--barrier-length", repr(length), "--n-max", "6")
    rows = table(out)
    assert rows[0] == ["N", "p_N", "h_N_tesla", "A_N", "w_N", "validity"]
    assert len(rows) == 7
    by_n = {int(r[0]): r for r in rows[1:]}
    assert by_n[3][5] == "near-resonance"
    assert abs(float(by_n[3][3])) < 1e-6 * wkb_action(PhysicalParams(barrier_length=length))
    assert by_n[4][1:5] == ["", "", "", ""] and by_n[4][5] == "no-solution"
    for r in rows[1:]:
        if r[3]:
            assert float(r[4]) == math.exp(-float(r[3]))


def test_trajectory_contract(capsys):
    code, out, _ = run(capsys, "trajectory", "--p", "1.76", "--cycles", "3")
    rows = table(out)
    assert code == 0 and rows[0] == ["s", "z", "dzds", "x_over_a"]
    data = [[float(v) for v in r] for r in rows[1:]]
    assert len(data) >= 600
    assert data[0][:3] == [0.0, 0.0, 0.0]
    assert data[0][3] == pytest.approx(3 * QUARTIC[1.76][2], rel=1e-10)
    assert data[-1][3] == 0.0


def test_trajectory_errors(capsys):
    assert run(capsys, "trajectory", "--p", "0")[0] == 1
    assert run(capsys, "trajectory")[0] == 1
    code, _, err = run(capsys, "trajectory", "--p", "1", "--family", "quadratic")
    assert code == 2 and "NoWell" in err


def test_curve_contract(capsys):
    code, out, _ = run(capsys, "curve", "--steps", "25")
    rows = table(out)
    assert code == 0 and rows[0] == ["H_tesla", "p", "A", "w", "validity"]
    assert float(rows[1][3]) == math.exp(-wkb_action(PhysicalParams()))
    assert rows[-1][4] == "beyond-method" and rows[-1][2:4] == ["", ""]
    w = [float(r[3]) for r in rows[1:] if r[4] == "valid"]
    assert all(b > a for a, b in zip(w, w[1:]))


def test_curve_bad_grid(capsys):
    assert run(capsys, "curve", "--h-min", "5", "--h-max", "1")[0] == 1
    assert run(capsys, "curve", "--steps", "1")[0] == 1


def test_check_potential(capsys):
    code, out, _ = run(capsys, "check-potential")
    wells = {r[0]: r[1] for r in table(out)[1:]}
    assert code == 0
    assert wells == {"quartic": "True", "quadratic": "False", "cosine": "False", "cosine2": "True"}


def test_custom_polynomial(capsys):
    code, out, _ = run(capsys, "check-potential", "--coeffs", "1:1,2:1,3:0.1")
    assert code == 0 and table(out)[-1][0] == "poly(1:1,2:1,3:0.1)"
    assert run(capsys, "resonance", "--coeffs", "x:1")[0] == 1


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "scan", "--n-min", "4", "--n-max", "2")[0] == 1
    code, _, err = run(capsys, "resonance", "--energy-depth", "-1")
    assert code == 1 and "energy_depth" in err
    assert run(capsys, "resonance", "--tol-quad", "0")[0] == 1


def test_config_file_and_overrides(capsys, tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# setup\nwell_scale = 140.0  # angstrom\nbarrier_length = 1820\nformat = json\n")
    code, out, _ = run(capsys, "scan", "--config", str(path), "--n-max", "2", "--format", "csv")
    assert code == 0 and table(out)[2][5] == "valid"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "resonance", "--config", str(bad))[0] == 1
    bad.write_text("well_scale = wide\n")
    assert run(capsys, "resonance", "--config", str(bad))[0] == 1
    assert run(capsys, "resonance", "--config", str(tmp_path / "missing.cfg"))[0] == 1


def test_out_file_and_determinism(capsys, tmp_path):
    target = tmp_path / "curve.csv"
    assert run(capsys, "curve", "--steps", "9", "--out", str(target))[0] == 0
    again = run(capsys, "curve", "--steps", "9")[1]
    data = target.read_bytes()
    assert data == again.encode() and b"\r" not in data


@settings(max_examples=50)
@given(
    st.floats(1e-6, 1.0),
    st.floats(1.0, 1e4),
    st.floats(1e-6, 1.0),
    st.floats(1.0, 1e5),
    st.floats(0.01, 100),
    st.sampled_from(["quartic", "cosine2", "quadratic"]),
    st.sampled_from(["csv", "json"]),
)
def test_config_round_trip(depth, scale, strength, length, mass, family, fmt):
    config = RunConfig(depth, scale, strength, length, mass, family, format=fmt, tol_quad=1.7e-11)
    assert RunConfig.from_text(config.to_text()) == config


def test_config_rejects_bad_values():
    with pytest.raises(UsageError):
        RunConfig(format="xml")
    with pytest.raises(UsageError):
        RunConfig(family="polynomial")
    with pytest.raises(UsageError):
        RunConfig(mass=0.0)


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "magtunnel.cli", "check-potential", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)[0]["well"] is True
