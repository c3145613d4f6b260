import json
import subprocess
import sys

import pytest

from workbench.cli import main, run


def test_bounds_prints_27(capsys):
    assert run("workbench bounds --group sl3 --p 3") == 0
    assert capsys.readouterr().out.strip() == "27"


def test_parabolic_json(tmp_path, capsys):
    out = tmp_path / "out.json"
    assert main(["parabolic", "--group", "sp4", "--which", "G0", "--p", "3", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1
    degrees = doc["result"]["degrees"]
    assert [d["free_rank"] for d in degrees] == ["1", "2", "2", "2", "1"]
    assert degrees[2]["torsion"] == ["3", "6"]
    manifest = json.loads((tmp_path / "out.json.manifest.json").read_text())
    assert set(manifest) == {"command", "p", "group", "output_path", "tool_version", "wall_time"}
    assert "H^2 = Z^2 + Z/3 + Z/6" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["building", "--group", "sl3", "--p", "4"],
    ["bounds", "--p", "2"],
    ["frobnicate", "--p", "3"],
    ["parabolic", "--group", "sl3", "--which", "G0", "--p", "3"],
    ["les", "--p", "3", "--field-char", "3"],
    ["les", "--p", "3", "--field-char", "6"],
    ["orders"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "usage" in capsys.readouterr().err


def test_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["les", "--group", "sl3", "--p", "5", "--json", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_building_exports(tmp_path, capsys):
    edges, js = tmp_path / "e.txt", tmp_path / "b.json"
    assert main(["building", "--group", "sp4", "--p", "3", "--edge-list", str(edges), "--json", str(js)]) == 0
    assert len(edges.read_text().splitlines()) == 160
    doc = json.loads(js.read_text())["result"]
    assert doc["homology"] == {"h0": "1", "h1": "81"}
    assert "rank H_1 = 81" in capsys.readouterr().out


def test_quotient_building(capsys):
    assert main(["building", "--group", "sl3", "--p", "5", "--quotient"]) == 0
    out = capsys.readouterr().out
    assert "Gamma(p)-quotient" in out
    assert "62 + 62 vertices, 744 edges" in out


def test_every_subcommand_runs(capsys):
    for argv in (["orders", "--group", "sp4", "--p", "3"], ["generators", "--p", "5"],
                 ["les", "--group", "sp4", "--p", "3"], ["les", "--p", "3", "--field-char", "2"],
                 ["bounds", "--group", "sp4", "--p", "3"]):
        assert main(argv) == 0
    out = capsys.readouterr().out
    assert "j0 = 160" in out
    assert "Gamma_2(5) is free of rank 11" in out
    assert "forced by chi = 0: 8" in out


def test_verify_all_exit_zero(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify-all", "--p", "3", "--json", str(out)]) == 0
    checks = json.loads(out.read_text())["result"]["checks"]
    assert {c["status"] for c in checks} <= {"PASS", "NOTE"}
    assert sum(c["status"] == "PASS" for c in checks) >= 8


def test_invariant_failure_exit_1(monkeypatch):
    from workbench import assembly
    from workbench.finite_lie import InvariantError

    def broken(*a, **k):
        raise InvariantError("chi_check = 3")
    monkeypatch.setattr(assembly, "build_les", broken)
    assert main(["les", "--p", "3"]) == 1


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "workbench", "bounds", "--group", "sl3", "--p", "5"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip() == "621"
