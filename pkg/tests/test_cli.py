from __future__ import annotations

import csv
import io
import json

import pytest
from click.testing import CliRunner

from casimir_modes.cli import ConfigError, main, parse_grid
from casimir_modes.lifshitz import ideal_mirror_force


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def table(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_parse_grid():
    assert parse_grid("0.1:0.3:3") == pytest.approx((0.1, 0.2, 0.3))
    assert parse_grid("2") == (2.0,)
    for bad in ("1:0:3", "0:1:0", "a:b:c", "0:1"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_dispersion_slab(run):
    res = run("dispersion", "--preset", "III", "--L", "0.63", "--q-grid", "0.5:1.5:3", "--pol", "both")
    assert res.exit_code == 0
    rows = table(res.output)
    assert {r["q [1]"] for r in rows} == {"0.5", "1", "1.5"}
    assert all(float(r["Omega [1]"]) < float(r["Omega_minus [1]"]) for r in rows)
    assert any(r["kind"] == "surface" for r in rows)


def test_dispersion_single_interface_closed_form(run):
    res = run("dispersion", "--preset", "single-interface", "--q-grid", "0.2:2:4")
    rows = table(res.output)
    assert len(rows) == 4
    for r in rows:
        assert float(r["Omega [1]"]) == pytest.approx(float(r["Omega_closed_form [1]"]), rel=1e-8)


def test_empty_grid_is_usage_error(run):
    res = run("dispersion", "--preset", "III", "--L", "0.63", "--q-grid", "0:1:0")
    assert res.exit_code == 2


def test_unknown_suite_is_usage_error(run):
    assert run("verify", "bogus").exit_code == 2


def test_verify_plasmon_passes(run, tmp_path):
    out = tmp_path / "report.json"
    res = run("verify", "plasmon", "--out", str(out))
    assert res.exit_code == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True


def test_verify_fails_with_impossible_tolerance(run):
    assert run("verify", "plasmon", "--tol", "1e-30").exit_code == 3
    assert run("verify", "plasmon", "--tol", "0").exit_code == 2


def test_force_ideal_mirror(run):
    res = run("force", "--preset", "ideal-mirror", "--gap-nm", "1000")
    assert res.exit_code == 0
    rows = table(res.output)
    assert len(rows) == 1
    assert float(rows[0]["F [Pa]"]) == pytest.approx(ideal_mirror_force(1e-6), rel=1e-6)
    assert rows[0]["ok"] == "1"


def test_json_schema(run):
    res = run("modes", "--preset", "IV", "--L", "6.3", "--q-grid", "0.5", "--format", "json")
    doc = json.loads(res.output)
    assert doc["schema_version"] == 1
    assert {"meta", "columns", "rows"} <= set(doc)
    assert all(len(r) == len(doc["columns"]) for r in doc["rows"])
    assert doc["meta"]["config_hash"]


def test_output_is_deterministic(run, tmp_path):
    args = ("energy", "--preset", "IV", "--gap-nm", "100", "--gap-nm", "300")
    a, b = run(*args).output, run(*args).output
    assert a == b
    assert len(table(a)) == 2


def test_config_file(run, tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[stack]\npreset = III\n[geometry]\nl = 0.63\n[grid]\nq = 1\npol = TM\n")
    res = run("dispersion", "--config", str(ini))
    assert res.exit_code == 0
    rows = table(res.output)
    assert rows and all(r["branch"].startswith("TM") for r in rows)
    bad = tmp_path / "bad.ini"
    bad.write_text("[nonsense]\nx = 1\n")
    assert run("dispersion", "--config", str(bad)).exit_code == 2
