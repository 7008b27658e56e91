import csv
import io
import json
from pathlib import Path

import pytest

from qlink.cli import run

SNAPSHOTS = Path(__file__).parent / "snapshots"


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_min_diameter(capsys):
    code, out, _ = invoke(capsys, "min-diameter", "--wavelength", "300 nm", "--distance", "1 pc")
    assert code == 0 and out.strip() == "85.1 km"
    code, out, _ = invoke(capsys, "min-diameter", "--wavelength", "300 nm", "--distance", "1 pc", "--format", "json")
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["min_diameter"] == "85067.91804924562 m"


def test_min_diameter_partner(capsys):
    code, out, _ = invoke(
        capsys, "min-diameter", "--wavelength", "300 nm", "--distance", "1 pc", "--d1", "170.2 km", "--digits", "4"
    )
    assert code == 0
    assert out.splitlines()[1].endswith("42.52 km")


@pytest.mark.parametrize("mode, text", [("q", "26.5 cm"), ("q2", "106 cm")])
def test_max_wavelength(capsys, mode, text):
    code, out, _ = invoke(capsys, "max-wavelength", "--mode", mode)
    assert code == 0 and out.strip() == text


def test_relay_plan(capsys):
    code, out, _ = invoke(
        capsys,
        "relay-plan",
        "--wavelength", "300 nm",
        "--distance", "1.30 pc",
        "--diameter", "100 m",
        "--mode", "paper_order_of_magnitude",
        "--format", "json",
    )
    payload = json.loads(out)
    assert code == 0
    assert payload["spacing"] == "30000000000.0 m"
    assert payload["hops"] == 1337127
    assert [o["hops"] for o in payload["options"]] == [1] + [10**k for k in range(1, 9)]


def test_analyze_text(capsys):
    code, out, _ = invoke(capsys, "analyze", "--scenario", "builtin:proxima-ground", "--format", "text")
    assert code == 0
    assert "binding constraint      beam" in out


@pytest.mark.parametrize("name", ["proxima-ground", "space-200km"])
def test_analyze_snapshots(capsys, name):
    code, out, _ = invoke(capsys, "analyze", "--scenario", f"builtin:{name}")
    assert code == 0
    assert json.loads(out) == json.loads((SNAPSHOTS / f"analyze_{name}.json").read_text(encoding="utf-8"))


def test_fail_on_infeasible(capsys):
    code, _, _ = invoke(capsys, "analyze", "--scenario", "builtin:proxima-ground", "--fail-on-infeasible")
    assert code == 1
    code, _, _ = invoke(capsys, "analyze", "--scenario", "builtin:space-200km", "--fail-on-infeasible")
    assert code == 0


def test_extinction_override(capsys, tmp_path):
    curve = tmp_path / "thick.csv"
    curve.write_text("wavelength_m,sigma_m2\n1e-8,1e-22\n1e1,1e-22\n", encoding="utf-8")
    code, out, _ = invoke(capsys, "analyze", "--scenario", "builtin:space-200km", "--extinction", str(curve))
    assert code == 0
    assert json.loads(out)["verdict"]["binding_constraint"] == "extinction"


def test_scan(capsys, tmp_path):
    code, out, _ = invoke(
        capsys, "scan", "--scenario", "builtin:space-200km",
        "--lambda-min", "100 nm", "--lambda-max", "2 m", "--points", "30",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["lambda_m", "eps_ext", "eps_atm", "eps_beam", "eps_depol", "verdict", "min_diameter_m"]
    assert len(rows) == 30
    assert all(r["verdict"] == "infeasible" for r in rows if float(r["lambda_m"]) > 1.07)
    target = tmp_path / "scan.csv"
    code, _, _ = invoke(
        capsys, "scan", "--scenario", "builtin:space-200km", "--lambda-min", "100 nm",
        "--lambda-max", "2 m", "--points", "30", "--out", str(target), "--workers", "3",
    )
    assert code == 0 and target.read_text(encoding="utf-8") == out


def test_simulate(capsys):
    args = ("simulate", "--scenario", "builtin:space-200km", "--photons", "20000", "--seed", "42")
    code, out, _ = invoke(capsys, *args)
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1 and payload["seed"] == 42
    _, again, _ = invoke(capsys, *args, "--workers", "2")
    assert again == out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["min-diameter", "--wavelength", "300 nm"],
        ["min-diameter", "--wavelength", "300 furlongs", "--distance", "1 pc"],
        ["min-diameter", "--wavelength", "1 yr", "--distance", "1 pc"],
        ["min-diameter", "--wavelength", "300 nm", "--distance", "1 pc", "--colour", "red"],
        ["min-diameter", "--wavelength", "300 nm", "--distance", "1 pc", "--unit", "yr"],
        ["max-wavelength", "--mode", "q3"],
        ["simulate", "--scenario", "builtin:space-200km", "--photons", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = invoke(capsys, *argv)
    assert code == 2
    assert err


def test_data_errors(capsys, tmp_path):
    code, _, err = invoke(capsys, "analyze", "--scenario", str(tmp_path / "missing.json"))
    assert code == 3 and "data error" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"distance": "1 pc"}), encoding="utf-8")
    assert invoke(capsys, "analyze", "--scenario", str(bad))[0] == 3
    code, _, _ = invoke(capsys, "analyze", "--scenario", "builtin:nope")
    assert code == 3
    code, _, _ = invoke(capsys, "analyze", "--scenario", "builtin:space-200km", "--extinction", "builtin:nope")
    assert code == 3
