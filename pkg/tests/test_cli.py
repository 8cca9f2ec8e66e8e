import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from kochgasket.cli import _COMMANDS, run

from cli_cases import CASES

GOLDEN = Path(__file__).parent / "golden"


def _run(tmp_path, argv, name="out"):
    out = tmp_path / name
    code = run(argv + ["--out", str(out)])
    return code, out.read_bytes() if out.exists() else None


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_bytes(tmp_path, name):
    code, data = _run(tmp_path, CASES[name])
    assert code == 0
    assert data == (GOLDEN / name).read_bytes()


def test_every_subcommand_has_a_golden():
    assert {argv[0] for argv in CASES.values()} == set(_COMMANDS)


def test_iterate_svg_has_eight_polygons(tmp_path):
    code, data = _run(tmp_path, ["iterate", "--a", "0.5", "--k", "3"], "x.svg")
    assert code == 0
    svg = data.decode()
    wedge_dart = re.findall(r'(<g class="(?:wedges|darts)".*?</g>)', svg, flags=re.S)
    assert sum(block.count("<polygon") for block in wedge_dart) == 8


def test_dim_near_boundary(capsys):
    assert run(["dim", "--a-complement", "1e-16", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["s"] == pytest.approx(1.018, abs=1e-3)


def test_koch_compare_exit_codes(capsys):
    assert run(["koch-compare", "--k", "3", "--tol", "1e-9"]) == 0
    assert run(["koch-compare", "--k", "2", "--a", "0.5"]) == 4
    assert run(["koch-compare", "--k", "9"]) == 2


def test_passing_verifications_exit_0(capsys):
    assert run(["simple-check", "--k", "4", "--a", "0.5"]) == 0
    assert run(["dim-max-check", "--h", "1e-4"]) == 0


@pytest.mark.parametrize("argv", [
    ["nope"],
    ["dim", "--bogus"],
    [],
    ["dim", "--a", "1.5"],
    ["dim", "--a", "0.5", "--a-complement", "0.1"],
    ["dim", "--format", "svg"],
    ["curve", "--tol", "1e-14"],
    ["curve", "--samples", "0"],
    ["dim", "--threads", "0"],
    ["boxdim", "--k", "8"],
    ["area-empirical", "--k", "7"],
    ["ifs-verify", "--k", "7"],
    ["dim-plot", "--a-min", "0.6", "--a-max", "0.5"],
])
def test_parameter_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_resource_cap_exit_3(capsys):
    assert run(["iterate", "--k", "27", "--format", "json"]) == 3


def test_help_exits_0(capsys):
    assert run(["--help"]) == 0
    assert "SUBCOMMAND" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["curve", "--samples", "32"],
    ["dim-plot", "--n", "41"],
    ["simple-check", "--k", "8"],
])
def test_threads_do_not_change_bytes(tmp_path, argv):
    _, one = _run(tmp_path, argv + ["--threads", "1"], "one")
    _, many = _run(tmp_path, argv + ["--threads", "4"], "many")
    assert one == many


def test_stdout_matches_out_file(tmp_path, capsys):
    argv = ["contacts", "--k", "4"]
    run(argv)
    assert capsys.readouterr().out.encode() == (GOLDEN / "contacts_k4.csv").read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kochgasket", "area", "--format", "csv", "--a", "0.5"],
        capture_output=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "area.csv").read_bytes()
