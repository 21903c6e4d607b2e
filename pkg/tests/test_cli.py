import json
import math
import subprocess
import sys

import numpy as np
import pytest

from logsmooth import cli
from logsmooth.embedding import CriterionResult
from logsmooth.spectrum import TrigPoly


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr().out
    return code, out


def test_hl_sum_matches_parseval(capsys):
    code, out = run(capsys, "norm", "--builder", "hl_sum", "--N", "64", "--p", "2", "--space", "lorentz",
                    "--tau", "2")
    assert code == 0
    H = sum(1 / l for l in range(1, 65))
    assert json.loads(out)["value"] == pytest.approx(math.sqrt(H / 2), abs=1e-3)


def test_const_zero(capsys):
    code, out = run(capsys, "norm", "--const-zero")
    assert code == 0 and json.loads(out)["value"] == 0


def test_file_sb_is_sum_of_block_norms(capsys, tmp_path):
    f = TrigPoly.cosine((1,)) + TrigPoly.cosine((3,), 2.0) + TrigPoly.cosine((9,), 0.5)
    path = tmp_path / "poly.json"
    f.save(path)
    code, out = run(capsys, "norm", "--file", str(path), "--space", "SB", "--p", "2", "--tau", "2",
                    "--theta", "1", "--b", "0")
    assert code == 0
    got = json.loads(out)
    want = (1 + 2 + 0.5) / math.sqrt(2)
    assert got["value"] == pytest.approx(want, rel=1e-9)
    assert sum(c["value"] for c in got["breakdown"]["contributions"]) == pytest.approx(want, rel=1e-9)


def test_output_is_deterministic(capsys):
    args = ("norm", "--builder", "G_s", "--s", "4", "--p", "3", "--space", "SB", "--tau", "2", "--theta", "2")
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second


def test_embed_check_verdicts(capsys):
    code, out = run(capsys, "embed-check", "--source-space", "bB", "--target-space", "bB", "--tau1", "2",
                    "--tau2", "2", "--theta1", "1", "--theta2", "1", "--b1", "1", "--b2", "0.5")
    assert code == 0 and json.loads(out)["result"]["verdict"] == "EMBEDS (Thm 4.1, cond 1)"
    code, out = run(capsys, "embed-check", "--tau1", "4", "--tau2", "2", "--theta1", "2", "--theta2", "1",
                    "--b1", "1", "--b2", "0")
    assert code == 0 and json.loads(out)["result"]["verdict"] == "EMBEDS (Thm 4.2.1)"


def test_contradiction_has_its_own_exit_code(capsys, monkeypatch):
    fake = CriterionResult("4.4", {}, symbolic="Converges", numeric="Diverges", verdict="EMBEDS (Thm 4.2.1)",
                           contradiction=True)
    monkeypatch.setattr(cli, "check_embedding", lambda *a, **k: fake)
    code, out = run(capsys, "embed-check", "--tau1", "4", "--tau2", "2", "--theta1", "2", "--theta2", "1")
    body = json.loads(out)["result"]
    assert code == cli.EXIT_CONTRADICTION
    assert body["symbolic"] == "Converges" and body["numeric"] == "Diverges"


@pytest.mark.parametrize("args", [
    ("norm", "--const-zero", "--p", "0.5"),
    ("embed-check", "--tau1", "2", "--tau2", "4", "--theta1", "2", "--theta2", "1"),
    ("norm", "--builder", "G_nu", "--nu", "9", "--p", "2"),
    ("counterexample", "f4_thm44", "--format", "csv"),
])
def test_errors_are_json(capsys, args):
    code, out = run(capsys, *args)
    assert code == cli.EXIT_ERROR
    err = json.loads(out)["error"]
    assert err["type"] and err["message"]


def test_counterexample_csv(capsys):
    code, out = run(capsys, "counterexample", "f0", "--format", "csv")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "truncation,source_norm,target_norm"
    vals = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    assert np.all(np.diff(vals[:, 2]) > 0)


def test_verify_lorentz_subprocess():
    proc = subprocess.run([sys.executable, "-m", "logsmooth.cli", "verify", "lorentz"], capture_output=True,
                          text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "PASS" in proc.stdout
