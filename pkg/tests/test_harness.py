import json

import pytest

from fraclab.errors import ConfigInvalid
from fraclab.harness import emit, parse, parse_config, run
from fraclab.harness.cli import main
from fraclab.report import SweepReport

FTFC = """
[experiment]
type = ftfc
function = bump
orders = 0.5, 0.75
"""

DERIV = """
[experiment]
type = deriv_limits
function = gaussian
weight = exp_decay
p = 2
orders = 0.9, 0.99

[grid]
t_min = -4
t_max = 4
n_points = 41
"""


def test_parse_config_fields():
    cfg = parse_config(DERIV)
    assert cfg.experiment == "deriv_limits"
    assert cfg.orders == (0.9, 0.99)
    assert (cfg.t_min, cfg.t_max, cfg.n_points) == (-4.0, 4.0, 41)
    assert cfg.echo()["weight"] == "exp_decay"


@pytest.mark.parametrize("text", [
    "[experiment]\ntype = nonsense\norders = 0.5\n",
    "[experiment]\ntype = ftfc\n",
    "[experiment]\ntype = ftfc\norders = 1.5\n",
    "[experiment]\ntype = ftfc\nfunction = sawtooth\norders = 0.5\n",
    "[experiment]\ntype = ftfc\norders = 0.5\n[quadrature]\nbogus = 3\n",
    "[grid]\nt_min = 0\n",
    "not an ini file",
    "[experiment]\ntype = deriv_limits\norders = 0.5\np = x\n",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigInvalid):
        parse_config(text)


def test_quadrature_override_applies():
    cfg = parse_config(FTFC + "[quadrature]\nn_singular = 48\n")
    assert cfg.quad().n_singular == 48


def test_emit_parse_round_trip():
    rep = SweepReport(("a", "b"), ((1e-300, -3), (0.1, 2)), {"k": [1, 2]})
    csv_bytes = emit(rep, "csv")
    assert csv_bytes.startswith(b"a,b\r\n")
    back = parse(csv_bytes, "csv")
    assert back.rows == rep.rows and back.columns == rep.columns
    js = parse(emit(rep, "json"), "json")
    assert js.rows == rep.rows and js.metadata == {"k": [1, 2]}


def test_run_records_config():
    rep = run(parse_config(FTFC))
    assert [r[0] for r in rep.rows] == [0.5, 0.75]
    assert all(r[1] <= 1e-4 for r in rep.rows)
    assert rep.metadata["config"]["experiment"] == "ftfc"


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["catalog"]) == 0
    assert "gaussian" in capsys.readouterr().out
    assert main(["sweep", "--config", str(tmp_path / "missing.ini")]) == 1
    assert main(["no-such-command"]) == 1
    assert main(["frac-deriv", "--fn", "gaussian", "--alpha", "1.5"]) == 1
    assert main(["frac-deriv", "--fn", "gaussian", "--alpha", "nan"]) == 1
    bad = tmp_path / "bad.ini"
    bad.write_text("[experiment]\ntype = ftfc\norders =\n")
    assert main(["sweep", "--config", str(bad)]) == 1


def test_cli_nonconvergence_exit_code(tmp_path):
    cfg = tmp_path / "tight.ini"
    cfg.write_text("[experiment]\ntype = deriv_limits\norders = 0.5\n"
                   "[grid]\nt_min = -2\nt_max = 2\nn_points = 9\n[quadrature]\ntolerance = 1e-300\n")
    assert main(["sweep", "--config", str(cfg)]) == 2


def test_cli_outputs_are_deterministic(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["frac-deriv", "--fn", "gaussian", "--alpha", "0.4", "--n-points", "41"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    cfg = tmp_path / "d.ini"
    cfg.write_text(DERIV)
    outs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("FRACLAB_THREADS", threads)
        out = tmp_path / f"sweep{threads}.json"
        assert main(["sweep", "--config", str(cfg), "--format", "json", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    obj = json.loads(outs[0])
    assert obj["columns"][0] == "alpha" and len(obj["rows"]) == 2


def test_bad_thread_setting(monkeypatch, tmp_path):
    cfg = tmp_path / "f.ini"
    cfg.write_text(FTFC)
    monkeypatch.setenv("FRACLAB_THREADS", "zero")
    assert main(["sweep", "--config", str(cfg)]) == 1


def test_weights_cli(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["weights", "check", "--weight", "exp_decay", "--p", "2", "--side", "two-sided",
                 "--jmin", "0", "--jmax", "6", "--out", str(out)]) == 0
    assert "cap exceeded" in capsys.readouterr().err
    assert out.read_text().splitlines()[0] == "a,h,product"


def test_frac_laplacian_cli(capsys):
    assert main(["frac-laplacian", "--fn", "cosine3", "--s", "0.5", "--method", "spectral",
                 "--t-min", "0", "--t-max", "6.283185307179586", "--n-points", "65"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 66
