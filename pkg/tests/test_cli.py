import json
import subprocess
import sys

import numpy as np
import pytest

from tkfit.cli import ingest_sample, main, parse_model
from tkfit.distributions import Logistic, Mixture, Normal
from tkfit.errors import DataError, ParameterError


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def normal_csv(tmp_path):
    p = tmp_path / "s.csv"
    x = np.random.default_rng(0).normal(1, 1, 100_000)
    p.write_text("\n".join(str(v) for v in x) + "\n")
    return str(p)


def test_parse_model():
    assert parse_model("normal:0,1") == Normal(0, 1)
    m = parse_model("mix:0.9;normal:0,1;normal:3,1")
    assert isinstance(m, Mixture) and m.weight == 0.9 and m.right == Normal(3, 1)
    assert isinstance(parse_model("logistic:0,2"), Logistic)
    for bad in ("gamma:1,2", "normal:0", "normal:a,1", "mix:0.5;normal:0,1"):
        with pytest.raises(ParameterError):
            parse_model(bad)


def test_ingest(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1.0\n2.5\n-0.3\n")
    assert ingest_sample(str(p)).tolist() == [1.0, 2.5, -0.3]
    p.write_text("height\n170.2\n165.0\n")
    assert ingest_sample(str(p), "height").tolist() == [170.2, 165.0]
    assert ingest_sample(str(p)).tolist() == [170.2, 165.0]
    p.write_text("1\n2\nabc\n")
    with pytest.raises(DataError, match="line 3"):
        ingest_sample(str(p))
    p.write_text("1\nnan\n")
    with pytest.raises(DataError, match="line 2"):
        ingest_sample(str(p))
    p.write_text("1\n\n2\n")
    assert ingest_sample(str(p)).size == 2
    with pytest.raises(DataError):
        ingest_sample(str(tmp_path / "missing.csv"))
    p.write_text("a,b\n1,2\n")
    with pytest.raises(DataError):
        ingest_sample(str(p), "c")


def test_distance_command(normal_csv, capsys):
    code, out, _ = run(["distance", "--model", "normal:0,1", "--alpha", "0.1", "--input", normal_csv], capsys)
    assert code == 0
    env = json.loads(out)
    assert set(env) == {"command", "config", "results", "tables", "provenance"}
    assert env["results"]["distance"] == pytest.approx(0.3507, abs=0.01)
    assert env["config"]["alpha"] == 0.1 and env["config"]["model"] == "normal:0,1"


def test_distance_between_laws(capsys):
    code, out, _ = run(["distance", "--model", "normal:0,1", "--target", "normal:1,1", "--alpha", "0.1"], capsys)
    assert code == 0
    assert json.loads(out)["results"]["distance"] == pytest.approx(0.3507, abs=1e-3)


def test_test_command_null(tmp_path, capsys):
    rejections = 0
    for seed in range(20):
        p = tmp_path / f"n{seed}.csv"
        p.write_text("\n".join(map(str, np.random.default_rng(seed).normal(size=1000))))
        code, out, _ = run(["test", "--model", "normal:0,1", "--alpha", "0.05", "--eps1", "0.05",
                            "--eps2", "0.05", "--input", str(p)], capsys)
        assert code == 0
        rejections += json.loads(out)["results"]["reject"]
    assert rejections <= 2


def test_confbounds_command(capsys):
    code, out, _ = run(["confbounds", "--model", "normal:0,1", "--dn", "0.0477", "--n", "20000",
                        "--alpha", "0.05"], capsys)
    r = json.loads(out)["results"]
    assert code == 0 and r["lower"] == pytest.approx(0.0376, abs=1e-4) and r["upper"] == pytest.approx(0.0538, abs=1e-4)


def test_credibility_command(capsys):
    code, out, _ = run(["credibility", "--model", "normal:0,1", "--dn", "0.0477", "--alpha", "0.05",
                        "--eps1", str(0.05 / (0.999 * np.e**2)), "--eps2", "0.05"], capsys)
    r = json.loads(out)["results"]
    assert code == 0 and r["l_delta"] == pytest.approx(359, abs=2) and r["u_delta"] == pytest.approx(1386, abs=2)


def test_simulate_table1(capsys):
    code, out, _ = run(["simulate", "table1", "--alpha", "0.1", "--n", "1000"], capsys)
    rows = json.loads(out)["tables"]["table1"]
    assert code == 0 and len(rows) == 9
    assert rows[0]["rho_n"] == pytest.approx(0.048, abs=1e-3)


def test_simulate_csv_and_out(tmp_path, capsys):
    out = tmp_path / "f2.csv"
    code, _, _ = run(["simulate", "figure2", "--n", "500", "--alphas", "0.05,0.15", "--replicates", "10",
                      "--seed", "1", "--format", "csv", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,alpha,reject_freq" and len(lines) == 3


def test_simulate_needs_seed(capsys):
    code, _, err = run(["simulate", "comp", "--replicates", "2"], capsys)
    assert code == 2 and "seed" in err


def test_determinism(capsys):
    argv = ["simulate", "comp", "--n", "200", "--replicates", "3", "--seed", "5"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv + ["--workers", "1"], capsys)
    ja, jb = json.loads(a), json.loads(b)
    assert ja["tables"] == jb["tables"]


def test_workers_do_not_change_results(capsys):
    argv = ["simulate", "figure2", "--n", "300", "--alphas", "0.05", "--replicates", "8", "--seed", "2"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv + ["--workers", "2"], capsys)
    assert json.loads(a)["tables"] == json.loads(b)["tables"]


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1\nx\n2\n")
    assert run(["distance", "--model", "normal:0,1", "--alpha", "0.1", "--input", str(bad)], capsys)[0] == 3
    assert run(["distance", "--model", "normal:0,1", "--alpha", "1.5", "--input", str(bad)], capsys)[0] in (2, 3)
    assert run(["distance", "--model", "foo:1", "--alpha", "0.1", "--input", str(bad)], capsys)[0] == 2
    good = tmp_path / "g.csv"
    good.write_text("0.1\n0.2\n")
    assert run(["alphastar", "--model", "normal:0,1", "--input", str(good), "--eps1", "2"], capsys)[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["nope"])
    assert e.value.code == 2


def test_tolregion_command(capsys):
    code, out, _ = run(["tolregion", "--model", "normal:0,1", "--alpha", "0.1", "--mu-grid=-0.2:0.2:5",
                        "--sigma-grid", "0.9:1.2:4", "--grid", "2000"], capsys)
    assert code == 0
    env = json.loads(out)
    assert env["tables"]


def test_kuiper_and_alphastar_commands(tmp_path, capsys):
    p = tmp_path / "m.csv"
    x = Mixture(0.9, Normal(), Normal(3, 1)).sample(2000, np.random.default_rng(1))
    p.write_text("\n".join(map(str, x)))
    code, out, _ = run(["kuiper", "--model", "normal:0,1", "--input", str(p)], capsys)
    k = json.loads(out)["results"]
    code2, out2, _ = run(["alphastar", "--model", "normal:0,1", "--input", str(p), "--eps1", "0.05"], capsys)
    a = json.loads(out2)["results"]
    assert code == code2 == 0
    assert 0 < k["bound"] <= 0.15
    assert 0.03 < a["alpha_star"] < 0.12


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "tkfit.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "distance" in r.stdout
