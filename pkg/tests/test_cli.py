import io
import json
import os
from pathlib import Path

import pytest

from frlim.cli import Config, UsageError, parse_abgroup, run
from frlim.exactalg import AbGroup

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

CASES = {
    "parse_text": (["parse", "rr frf"], 0),
    "parse_json": (["--format", "json", "parse", "(r+f)^2 & rf"], 0),
    "game_text": (["game", "r ff", "--generations", "5"], 0),
    "game_json": (["--format", "json", "game", "rr+fff", "--generations", "4"], 0),
    "game_compare": (["game", "rr fff", "--generations", "5", "--compare", "--max-n", "7"], 0),
    "homology_json": (["--format", "json", "homology", "cyclic3.json", "--degree", "3"], 0),
    "homology_text": (["homology", "s3.json", "--degree", "3"], 0),
    "homology_coeff": (["homology", "klein4.json", "--degree", "2", "--coefficients", "Z/2"], 0),
    "eval_text": (["eval", "rr+frf", "--lim", "1", "cyclic3.json"], 0),
    "eval_json": (["--format", "json", "eval", "rfr+frr+ffff", "klein4.json"], 0),
    "verify_table": (["verify-table", "cyclic2.json", "--max-lim", "2", "--no-game-chain"], 0),
    "verify_table_json": (["--format", "json", "verify-table", "cyclic3.json", "--max-lim", "1"], 0),
    "catlim_constant": (["catlim", "square_poset.json", "--n", "1"], 0),
    "catlim_rep_json": (["--format", "json", "catlim", "z2_sign.json", "--n", "3"], 0),
}


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    os.chdir(DATA)
    try:
        code = run(argv, out, err)
    finally:
        os.chdir(cwd)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    argv, expected_code = CASES[name]
    code, out, err = invoke(argv)
    assert code == expected_code, err
    golden = (GOLDEN / f"{name}.out").read_text()
    assert out == golden


@pytest.mark.parametrize("name", ["game_json", "eval_json", "verify_table_json"])
def test_json_output_is_byte_stable(name):
    argv, _ = CASES[name]
    assert invoke(argv)[1] == invoke(argv)[1]
    json.loads(invoke(argv)[1])


def test_homology_json_shape():
    code, out, _ = invoke(CASES["homology_json"][0])
    assert json.loads(out) == {"rank": 0, "torsion": [3]}


@pytest.mark.parametrize("argv", [
    ["parse", "x+y"],
    [],
    ["game"],
    ["game", "r ff", "--generations", "0"],
    ["game", "r & ff"],
    ["homology", "missing.json", "--degree", "1"],
    ["homology", "cyclic3.json", "--degree", "-1"],
    ["--degrees", "6,5,4", "parse", "r"],
    ["--degrees", "a", "parse", "r"],
    ["catlim", "z2_category.json", "--n", "1", "--coefficients", "Q"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv):
    code, out, err = invoke(argv)
    assert code == 2
    assert err.startswith("frlim:")


def test_computation_error_is_serialized(tmp_path):
    path = tmp_path / "inf.json"
    path.write_text(json.dumps({"generators": ["x", "y"], "relators": ["x^2"]}))
    code, out, err = invoke(["--format", "json", "--coset-bound", "50", "homology", str(path),
                             "--degree", "1"])
    assert code == 1
    assert json.loads(out)["error"] == "Overflow"


def test_unknown_code_is_a_computation_error():
    code, out, _ = invoke(["--format", "json", "eval", "rfrf", "cyclic3.json"])
    assert code == 1
    assert json.loads(out)["error"] == "UnknownCode"


def test_config_validation():
    assert Config(degrees=[4, 5]).degrees == (4, 5)
    with pytest.raises(UsageError):
        Config(degrees=(5, 4))
    with pytest.raises(UsageError):
        Config(coset_bound=0)
    assert parse_abgroup("Z^2 + Z/2") == AbGroup(2, (2,))
    assert parse_abgroup("0") == AbGroup()


def test_thread_env(monkeypatch):
    monkeypatch.setenv("FRLIM_THREADS", "2")
    assert Config().threads == 2
    argv = ["--format", "json", "verify-table", "cyclic2.json", "cyclic3.json",
            "--max-lim", "1", "--no-game-chain"]
    parallel = invoke(argv)
    monkeypatch.setenv("FRLIM_THREADS", "1")
    assert invoke(argv) == parallel
