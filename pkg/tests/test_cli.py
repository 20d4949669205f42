import json
import subprocess
import sys

import pytest

from cashift import __version__
from cashift.cli import run


def invoke(capsysbinary, *argv):
    code = run(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out, out.err


def report(capsysbinary, *argv):
    code, out, _ = invoke(capsysbinary, *argv)
    return code, json.loads(out)


def test_normalize(capsysbinary):
    code, rep = report(capsysbinary, "normalize", "--p", "2", "--poly", "1+x1^-1+x2^-1")
    assert code == 0
    assert rep["result"]["phi"] == "1+x1^-1"
    assert rep["result"]["transform"] == "invert axis 2"
    assert rep["command"] == "normalize" and rep["version"] == __version__
    assert rep["config"]["p"] == 2 and rep["config"]["seed"] == 0


def test_nonmix_cert(capsysbinary):
    code, rep = report(capsysbinary, "nonmix-cert", "--p", "2", "--phi", "1+x1", "--r", "1", "--jmax", "5")
    assert code == 0
    assert rep["result"]["verdict"] == "non-mixing-witnessed"
    assert all(d["joint"] == {"zero": True} for d in rep["result"]["dilations"])
    assert rep["result"]["product"] == {"p_exp": 3}


def test_hom_search_distinct(capsysbinary):
    code, rep = report(capsysbinary, "hom-search", "--phi", "1+x1", "--psi", "x1+x1^-1",
                       "--shape", "(0,0);(1,0)")
    assert code == 0 and rep["result"]["rules"] == ["zero"]
    assert rep["result"]["constant_offsets"] == [0]


def test_hom_search_methods_agree(capsysbinary):
    a = report(capsysbinary, "hom-search", "--phi", "1+x1", "--psi", "1+x1", "--shape", "(0,0);(0,1);(-1,1)")[1]
    b = report(capsysbinary, "hom-search", "--phi", "1+x1", "--psi", "1+x1", "--shape", "(0,0);(0,1);(-1,1)",
               "--method", "linear")[1]
    assert a["result"]["rules"] == b["result"]["rules"]
    assert len(a["result"]["rules"]) == 4  # rank-2 language: every linear form commutes


def test_evolve_text(capsysbinary):
    code, out, _ = invoke(capsysbinary, "evolve", "--phi", "1+x1", "--steps", "3", "--format", "text")
    assert code == 0 and out == b"1...\n11..\n1.1.\n1111"


def test_evolve_pgm_to_file(capsysbinary, tmp_path):
    path = tmp_path / "pascal.pgm"
    code, out, _ = invoke(capsysbinary, "evolve", "--phi", "1+x1", "--steps", "3", "--format", "pgm",
                          "--out", str(path))
    assert code == 0 and out == b""
    data = path.read_bytes()
    assert data.startswith(b"P5 4 4 255\n") and len(data) == len(b"P5 4 4 255\n") + 16


def test_evolve_json(capsysbinary):
    code, rep = report(capsysbinary, "evolve", "--phi", "1+x1", "--p", "3", "--steps", "2")
    assert rep["result"]["rows"][2] == [1, 2, 1]


def test_measure(capsysbinary):
    code, rep = report(capsysbinary, "measure", "--phi", "1+x1", "--shape", "(0,0);(0,1);(-1,1)",
                       "--values", "1,0,0")
    assert rep["result"]["measure"] == {"zero": True}


def test_language(capsysbinary):
    code, rep = report(capsysbinary, "language", "--phi", "1+x1", "--shape", "(0,0);(0,1);(-1,1)")
    assert rep["result"]["rank"] == 2 and rep["result"]["size"] == 4


def test_mixing_scan(capsysbinary):
    code, rep = report(capsysbinary, "mixing-scan", "--phi", "1+x1^-1", "--shape", "(0,0);(1,0);(1,1)",
                       "--values", "1,0,0", "--dilations", "2,4,8")
    assert [e["joint"] for e in rep["result"]["entries"]] == [{"zero": True}] * 3
    assert rep["result"]["product"] == {"p_exp": 3}
    assert rep["result"]["all_equal"] is False


def test_horizontal(capsysbinary):
    code, rep = report(capsysbinary, "horizontal-check", "--phi", "1+x1", "--shape", "(0,0);(1,0);(2,0)",
                       "--mmax", "8")
    assert code == 0 and rep["result"]["m0"] == 1 and rep["result"]["product"] == {"p_exp": 3}


def test_dual_homs(capsysbinary):
    code, rep = report(capsysbinary, "dual-homs", "--phi", "1+x1", "--shape", "(0,0);(1,0)")
    assert sorted(rep["result"]["classes"]) == ["0", "1", "1+x1", "x1"]


def test_aut(capsysbinary):
    code, rep = report(capsysbinary, "aut", "--phi", "1+x1+x1^2")
    assert rep["result"]["rank"] == 2
    assert rep["result"]["free_generators"] == ["x1", "1+x1+x1^2"]


def test_aut_hint(capsysbinary):
    code, rep = report(capsysbinary, "aut", "--d", "3", "--phi", "1+x1+x2+x1x2",
                       "--hint", "1+x1:1", "--hint", "1+x2")
    assert code == 0 and rep["result"]["factors_asserted"] and rep["result"]["rank"] == 4


def test_factor_collinear_constants(capsysbinary):
    rep = report(capsysbinary, "factor", "--poly", "1+x1^3")[1]["result"]
    assert rep["factors"] == [["1+x1", 1], ["1+x1+x1^2", 1]]
    rep = report(capsysbinary, "collinear", "--poly", "1+x1^2+x1^4")[1]["result"]
    assert rep["direction"] == [1, 0] and rep["step"] == 2
    rep = report(capsysbinary, "collinear", "--phi", "1+x1")[1]["result"]
    assert rep == {"collinear": False}
    rep = report(capsysbinary, "constants", "--phi", "1+x1+x1^2")[1]["result"]
    assert rep["constants"] == [0, 1]


@pytest.mark.parametrize("argv", [
    ["normalize", "--poly", "1+"],
    ["normalize", "--poly", "1+x1+x1^2"],
    ["measure", "--phi", "1+x1", "--shape", "(0,0", "--values", "1"],
    ["measure", "--phi", "1+x1", "--shape", "(0,0)", "--values", "1,0"],
    ["language", "--phi", "1+x1"],
    ["frobnicate"],
    ["normalize", "--p", "4", "--poly", "x2-1-x1"],
    ["hom-search", "--phi", "1+x1", "--psi", "1+x1", "--shape", "(0,0);(1,0);(2,0);(3,0);(4,0)",
     "--budget", "4"],
])
def test_usage_errors_exit_2(capsysbinary, argv):
    code, out, err = invoke(capsysbinary, *argv)
    assert code == 2 and out == b""


def test_negative_verdict_exit_1(capsysbinary, monkeypatch):
    from cashift import cli, mixing

    monkeypatch.setattr(mixing.CertificateReport, "verdict", property(lambda self: "not-witnessed"))
    code, rep = report(capsysbinary, "nonmix-cert", "--phi", "1+x1", "--jmax", "1")
    assert code == 1


def test_reports_reproducible(capsysbinary):
    argv = ["mixing-scan", "--phi", "1+x1", "--shape", "(0,0);(1,1)", "--seed", "3"]
    a = invoke(capsysbinary, *argv)[1]
    b = invoke(capsysbinary, *argv)[1]
    assert a == b
    cfg = json.loads(a)["config"]
    rerun = ["mixing-scan", "--phi", cfg["phi"], "--shape", cfg["shape"], "--seed", str(cfg["seed"])]
    assert invoke(capsysbinary, *rerun)[1] == a


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cashift", "constants", "--phi", "1+x1"],
                          capture_output=True, check=True)
    assert json.loads(proc.stdout)["result"]["constants"] == [0]
