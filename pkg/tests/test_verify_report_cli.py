import csv
import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from ntlab import __version__
from ntlab.cli import EXIT_CONFIG, EXIT_FLAGGED, EXIT_OK, main
from ntlab.lseries import ConfigError
from ntlab.report import ExperimentConfig, VerificationRow, dumps_json, envelope, flatten, rows_to_csv, to_jsonable
from ntlab.verify import SUITES, ladder_ok, run_verify

FAST = ["A1", "A2", "A4", "AA1", "AA2", "AA3", "I1", "I1-cor", "I4", "I5", "I6"]


def test_row_ratio():
    r = VerificationRow.build("I1", {"x": 10}, 3, 4)
    assert r.ratio == 0.75 and r.to_json()["ratio"] == 0.75
    assert VerificationRow.build("I1", {}, 1, 0).ratio is None


def test_to_jsonable():
    assert to_jsonable(1 + 2j) == [1.0, 2.0]
    assert to_jsonable(float("inf")) == "inf"
    assert to_jsonable(Fraction(1, 3)) == "1/3"
    assert to_jsonable(np.arange(3)) == [0, 1, 2]
    assert to_jsonable(np.bool_(True)) is True


def test_envelope_fields():
    cfg = ExperimentConfig("demo", D=5, seed=3, extra={"ladder": [1, 2]})
    rep = envelope(cfg, {"v": 1}, {"c": 1.0})
    assert rep["version"] == __version__
    assert rep["config"]["D"] == 5 and rep["config"]["ladder"] == [1, 2] and rep["config"]["seed"] == 3
    assert "disclaimer" in rep and rep["calibration"] == {"c": 1.0}
    assert dumps_json(rep) == dumps_json(json.loads(dumps_json(rep)))


def test_csv_format():
    text = rows_to_csv([{"b": 1, "a": [1, 2]}, {"a": None, "c": 1.5}])
    assert text.endswith("\r\n") and "\n" not in text.replace("\r\n", "")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["a", "b", "c"]
    assert rows[1] == ["[1,2]", "1", ""]
    assert flatten({"x": {"y": 1}, "z": [{"w": 2}]}) == [{"key": "x.y", "value": 1}, {"key": "z[0].w", "value": 2}]


def test_bad_format():
    with pytest.raises(ValueError):
        ExperimentConfig("demo", fmt="xml")


def test_ladder_policy():
    ok, running = ladder_ok([1.0, 2.0, 1.5, 2.0])
    assert ok and running == [1.0, 2.0, 2.0, 2.0]
    assert not ladder_ok([1.0, 2.0, 2.5])[0]
    assert ladder_ok([-0.3, -0.2, -0.2 + 1e-14])[0]


@pytest.mark.parametrize("lemma", FAST)
def test_fast_suites_pass(lemma):
    res = run_verify(lemma, ExperimentConfig(f"verify:{lemma}"))
    assert res.passed, res.to_json()
    assert res.rows and all(r.lemma == lemma for r in res.rows)


def test_suites_registered():
    assert {"I1", "I1-cor", "I2", "I3", "I4", "I5", "I6", "I7", "A1", "A2", "A3", "A4", "AA1", "AA2", "AA3"} <= set(SUITES)


def test_verify_config_error():
    with pytest.raises(ConfigError):
        run_verify("I6", ExperimentConfig("verify:I6", g="random-unitdisc(1)"))


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_decompose(capsys):
    code, out, _ = run_cli(["decompose", "--D", "2", "--y", "100"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["result"]["residual"] == [0.0, 0.0]
    assert rep["config"]["D"] == 2 and rep["tool"] == "ntlab"


def test_cli_exit_codes(capsys):
    assert run_cli(["nonsense"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["decompose", "--D", "4", "--a", "2", "--y", "100"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["verify", "I6", "--g", "random-unitdisc(1)"], capsys)[0] == EXIT_CONFIG
    assert run_cli(["sieve-stats", "--x", "100"], capsys)[0] == EXIT_OK
    flagged = ["halasz", "--g", "one", "--x", "10000", "--T", "5", "--c1", "-100"]
    assert run_cli(flagged, capsys)[0] == EXIT_FLAGGED


def test_cli_deterministic(capsys, tmp_path):
    argv = ["verify", "I5", "--seed", "7"]
    a = run_cli(argv, capsys)[1]
    b = run_cli(argv, capsys)[1]
    assert a == b
    c = run_cli(["verify", "I5", "--seed", "8"], capsys)[1]
    assert a != c
    out = tmp_path / "r.csv"
    code, text, _ = run_cli(["verify", "I5", "--seed", "7", "--format", "csv", "--out", str(out)], capsys)
    assert code == EXIT_OK and text == ""
    data = out.read_bytes()
    assert data.startswith(b"calibration,lemma,lhs,params,ratio,rhs,status\r\n")
    assert len(data.split(b"\r\n")) == 102


def test_cli_sieve_stats(capsys):
    rep = json.loads(run_cli(["sieve-stats", "--x", "100"], capsys)[1])["result"]
    assert rep["prime_count"] == 25 and rep["mertens_M"] == 1 and rep["largest_prime"] == 97
    assert rep["chebyshev_psi"] == pytest.approx(sum(math.log(p) * int(math.log(100, p) + 1e-12) for p in
                                                    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]))


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "ntlab.cli", "sieve-stats", "--x", "30"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["prime_count"] == 10
