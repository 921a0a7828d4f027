import json

import pytest

import biocascade.rfnc
from biocascade import cli
from biocascade.bayes import basic_model
from biocascade.markov import single_site
from biocascade.sim.figures import DEFAULT_SEED


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_default_seed(monkeypatch):
    monkeypatch.delenv("BIOCASCADE_SEED", raising=False)
    assert cli.default_seed() == cli.FALLBACK_SEED == DEFAULT_SEED
    monkeypatch.setenv("BIOCASCADE_SEED", "7")
    assert cli.default_seed() == 7


def test_infer_basic_example(tmp_path, capsys):
    path = write(tmp_path, "m.json", basic_model(2, 5).to_dict())
    code, out, _ = run(capsys, "infer", path, "--verify")
    assert code == 0
    assert out.splitlines() == ["observation,S0,S1", "k,1,10", "verify,OK"]


def test_infer_uniform(tmp_path, capsys):
    model = {"n_s": 3, "n_f": 1, "prior": ["1/3"] * 3, "likelihoods": {"k": ["1/2"] * 3}}
    code, out, _ = run(capsys, "infer", write(tmp_path, "u.json", model))
    assert code == 0 and out.splitlines()[1] == "k,1,1,1"


def test_infer_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "infer", str(bad))[0] == cli.EXIT_PARSE
    zero = {"n_s": 2, "n_f": 1, "prior": ["0", "1"], "likelihoods": {"k": ["1", "1"]}}
    assert run(capsys, "infer", write(tmp_path, "z.json", zero))[0] == cli.EXIT_MODEL


@pytest.mark.parametrize("text,target", [("x0 * x1", "cascade"), ("x0 + x1", "bayes"), ("1", "cascade"), ("1", "bayes")])
def test_compile_check(tmp_path, capsys, text, target):
    out = tmp_path / "art.json"
    code, _, err = run(capsys, "compile", text, "--target", target, "--check", "--out", str(out))
    assert code == 0 and "max_deviation=0,OK" in err
    assert json.loads(out.read_text())


def test_compile_product_is_gadget(capsys):
    code, out, _ = run(capsys, "compile", "x0 * x1", "--target", "cascade")
    net = json.loads(out)
    assert code == 0 and len(net["nodes"]) == 3 and net["nodes"][-1]["inputs"] == ["y0", "y1"]


def test_compile_mismatch_exit(monkeypatch, capsys):
    real = biocascade.rfnc.evaluate
    monkeypatch.setattr(biocascade.rfnc, "evaluate", lambda e, x: real(e, x) + 1)
    assert run(capsys, "compile", "x0", "--check")[0] == cli.EXIT_COMPILE


def test_compile_parse_error(capsys):
    assert run(capsys, "compile", "x0 +")[0] == cli.EXIT_PARSE
    assert run(capsys, "parse", "x0 + -1")[0] == cli.EXIT_PARSE


def test_equilibrium(tmp_path, capsys):
    net = tmp_path / "n.json"
    assert run(capsys, "compile", "x0 / x1", "--out", str(net))[0] == 0
    code, out, _ = run(capsys, "equilibrium", str(net), "--x", "3,4")
    assert code == 0 and out.splitlines()[-1] == "y2,3/4"
    assert run(capsys, "equilibrium", str(net), "--x", "3,0")[0] == cli.EXIT_MODEL


def test_stationary(tmp_path, capsys):
    path = write(tmp_path, "s.json", single_site(150, 8000).to_dict())
    code, out, _ = run(capsys, "stationary", path, "--x", "2")
    assert code == 0 and out.splitlines()[-1] == "ACTIVE,3/83,"
    code, out, _ = run(capsys, "stationary", path, "--symbolic")
    assert out.splitlines()[-1] == "ACTIVE,(150*x0) / (8000 + 150*x0),"


def test_simulate(tmp_path, capsys):
    system = {
        "volume": 0.1, "species": ["X"], "initial": [0],
        "macromolecules": [{"prefix": "R", "spec": single_site(150, 8000).to_dict(), "messengers": ["X"], "count": 50}],
        "clamped": ["X"], "schedule": {"times": [0.01], "concentrations": [2.0, 20.0]},
    }
    path = write(tmp_path, "sys.json", system)
    code, out, _ = run(capsys, "simulate", path, "--t-end", "0.02", "--grid", "0.01", "--seed", "1")
    lines = out.splitlines()
    assert code == 0 and lines[1] == "time,X,R0,R1" and len(lines) == 5
    code, out, _ = run(capsys, "simulate", path, "--t-end", "0.02", "--grid", "0.01", "--replicates", "4")
    assert out.splitlines()[1] == "time,X_mean,X_std,R0_mean,R0_std,R1_mean,R1_std"


def test_parse_tree(capsys):
    code, out, _ = run(capsys, "parse", "x0*(x1+1/2)", "--tree")
    assert out.strip() == "Product(Input(0), Sum(Input(1), Const(1/2)))"


def test_verify_and_mutant(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "7", "--cases", "5")
    assert code == 0 and out.splitlines()[-1].startswith("summary,PASS")
    code, out, _ = run(capsys, "verify", "--cases", "5", "--inject-mutant")
    assert code == cli.EXIT_PROPERTY and "NegativeConstantError" in out


def test_figure1_check(tmp_path, capsys):
    out = tmp_path / "f1.csv"
    code, _, err = run(capsys, "figure1", "--check", "--out", str(out))
    text = out.read_text()
    assert code == 0 and text.startswith("# figure1 seed=")
    assert text.splitlines()[1].startswith("time_s,")
    assert "checks passed" in err
