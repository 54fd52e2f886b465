import csv
import json

import numpy as np
import pytest

from ftsm import __version__
from ftsm.charfn import cf_ftsm
from ftsm.cli import main, read_config
from ftsm.kernel import KernelParams
from ftsm.measure import rho1


def _rows(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    return lines[:2], list(csv.reader(lines[2:]))


def test_kernel_levy_case(capsys):
    assert main(["kernel", "--H", "0.625", "--alpha", "1.6", "--t", "1", "--s", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "K=1\n" in out and "regime=levy" in out


def test_kernel_lp_const(capsys):
    assert main(["kernel", "--H", "0.8", "--alpha", "1.6", "--s", "0.5", "--p", "2"]) == 0
    out = dict(line.split("=", 1) for line in capsys.readouterr().out.split())
    assert float(out["C_p"]) == pytest.approx(1.0, rel=1e-9)
    assert main(["kernel", "--H", "0.3", "--alpha", "1.6", "--s", "0.5", "--p", "4"]) == 2


def test_bad_parameters_exit_two(capsys):
    assert main(["kernel", "--H", "3", "--alpha", "1.6", "--s", "0.5"]) == 2
    assert "outside" in capsys.readouterr().err
    assert main(["kernel", "--H", "0.8", "--alpha", "2.5", "--s", "0.5"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--kind", "bogus", "--H", "0.8", "--alpha", "1.6"])
    assert exc.value.code == 2


@pytest.mark.parametrize("kind", ["ts", "ftsm", "fsm", "fbm", "coupled"])
def test_simulate_outputs(tmp_path, kind):
    out = tmp_path / "p.csv"
    argv = ["simulate", "--kind", kind, "--H", "0.8", "--alpha", "1.6", "--rho", "rho1", "--grid-n", "8",
            "--terms", "60", "--reps", "3", "--seed", "4", "--out", str(out)]
    assert main(argv) == 0
    head, rows = _rows(out)
    assert head[0] == f"# ftsm {__version__}" and "seed=4" in head[1] and f"kind={kind}" in head[1]
    cols = rows[0]
    assert cols[:2] == ["rep", "t"] and (cols[2:] == ["ftsm", "ts"] if kind == "coupled" else cols[2:] == ["value"])
    assert len(rows) == 1 + 3 * 9
    assert all(float(v) == 0.0 for r in rows[1:] if float(r[1]) == 0.0 for v in r[2:])
    side = json.loads((tmp_path / "p.csv.json").read_text())
    assert side["config"]["seed"] == 4 and side["columns"] == cols
    assert "out" not in side["config"] and "workers" not in side["config"]


def test_simulate_deterministic_across_workers(tmp_path):
    base = ["simulate", "--H", "0.8", "--alpha", "1.6", "--rho", "rho2", "--grid-n", "10", "--terms", "100",
            "--reps", "25", "--seed", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(base + ["--out", str(a), "--workers", "1"]) == 0
    assert main(base + ["--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv.json").read_bytes() == (tmp_path / "b.csv.json").read_bytes()


def test_simulate_rough_warns(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["simulate", "--H", "0.5", "--alpha", "1.6", "--grid-n", "4", "--terms", "20", "--out", str(out)]) == 0
    assert "unbounded" in capsys.readouterr().err
    assert json.loads((tmp_path / "r.csv.json").read_text())["flags"]["unbounded_regime"] is True


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nH = 0.8\nalpha = 1.6\ngrid-n = 4\nterms = 30\nreps = 2\nseed = 5\n"
                   f"out = {tmp_path / 'c.csv'}\n")
    assert main(["simulate", "--config", str(cfg)]) == 0
    head, _ = _rows(tmp_path / "c.csv")
    assert "seed=5" in head[1] and "grid_n=4" in head[1]
    # explicit flags override the file
    assert main(["simulate", "--config", str(cfg), "--seed", "6"]) == 0
    assert "seed=6" in _rows(tmp_path / "c.csv")[0][1]
    assert read_config(cfg)["grid_n"] == "4"
    cfg.write_text("H = 0.8\nbogus = 1\n")
    assert main(["simulate", "--config", str(cfg), "--alpha", "1.6"]) == 2
    assert main(["simulate", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_cf_command(capsys):
    assert main(["cf", "--kind", "ftsm", "--H", "0.8", "--alpha", "1.6", "--y", "0", "1.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "y=0.0 cf=1.0+0j"
    z = complex(lines[1].split("cf=")[1])
    assert z == pytest.approx(cf_ftsm(1.5, 1.0, KernelParams(0.8, 1.6), rho1()), abs=1e-15)
    for kind in ("ts", "fsm", "short", "long"):
        assert main(["cf", "--kind", kind, "--H", "0.8", "--alpha", "1.6", "--h", "0.5"]) == 0
    assert main(["cf", "--H", "0.8", "--alpha", "1.6", "--h", "-1"]) == 2


def test_codiff_command(capsys):
    assert main(["codiff", "--H", "0.8", "--alpha", "1.6", "--t", "10", "100"]) == 0
    out = capsys.readouterr().out
    assert out.count("codifference=") == 2
    assert float(out.split("exponent=")[1]) == pytest.approx(2 * (KernelParams(0.8, 1.6).G - 1), abs=1e-15)
    assert main(["codiff", "--H", "0.8", "--alpha", "1.6", "--t", "0.5"]) == 2


def test_verify_command(tmp_path, capsys):
    js = tmp_path / "r.json"
    code = main(["verify", "--suite", "holder", "--scale", "0.05", "--seed", "3", "--json", str(js)])
    out = capsys.readouterr().out
    reports = json.loads(js.read_text())
    assert len(reports) == 1 and reports[0]["name"] == "holder_variogram_exponent"
    assert "1 checks passed" in out or "0/1 checks passed" in out
    assert code == (0 if reports[0]["passed"] else 1)
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nope"])
    assert exc.value.code == 2
    assert main(["verify", "--suite", "holder", "--scale", "0"]) == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0 and __version__ in capsys.readouterr().out
