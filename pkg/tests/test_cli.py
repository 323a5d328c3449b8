import json

import numpy as np
import pytest

from qcorr import cli
from qcorr import geometric as geo
from qcorr.plotting import read_csv_columns


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_zero_state(capsys):
    code, out, _ = run(capsys, "analyze", "0", "0", "0")
    assert code == 0
    assert "QG=0  CG=0  TG=0" in out and "QE=0  CE=0  TE=0" in out


def test_analyze_unphysical(capsys):
    code, _, err = run(capsys, "analyze", "0.5", "0.4", "0.3")
    assert code == 2
    assert "lambda_11 = -0.05" in err


def test_analyze_bell_vertex_json(capsys):
    code, out, _ = run(capsys, "analyze", "1", "-1", "1", "--format", "json", "--verify")
    assert code == 0
    d = json.loads(out)
    assert d["TE"] == pytest.approx(2.0) and d["TG"] == pytest.approx(1.5)


@pytest.mark.parametrize("argv", [["analyze", "1", "x", "0"], ["analyze", "1"], ["bogus"], []])
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == 1


def test_sweep_single_point(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "su2", "--range", "0", "0", "--steps", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(cli.SWEEP_COLUMNS)
    assert lines[1] == "0,0,0,0,true,0,0,0,0,0,0"


def test_sweep_domain_violation(capsys):
    code, _, err = run(capsys, "sweep", "--family", "su2", "--range", "-1", "1/2")
    assert code == 1 and "domain" in err
    assert cli.main(["sweep", "--family", "u1", "--range", "-1", "0"]) == 1


def test_sweep_accepts_fraction_bound(capsys):
    code, out, _ = run(capsys, "sweep", "--range", "-1", "1/3", "--steps", "4")
    assert code == 0 and len(out.splitlines()) == 5


def test_sweep_csv_round_trip_and_plot(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    code, _, _ = run(capsys, "sweep", "--family", "su2", "--steps", "200", "-o", str(out), "--plot")
    assert code == 0
    assert b"\r" not in out.read_bytes()
    data = read_csv_columns(out)
    c = np.stack([data["x"]] * 3, axis=-1)
    assert np.max(np.abs(data["TG"] - geo.t_g_closed(c))) < 1e-10
    assert (tmp_path / "fig1.svg").exists()
    code, _, _ = run(capsys, "plot", str(out), "--x", "x", "--y", "TE,TG", "-o", str(tmp_path / "p.svg"))
    assert code == 0


def test_plot_missing_column(tmp_path, capsys):
    csv = tmp_path / "a.csv"
    csv.write_text("x,y\n0,1\n")
    code, _, err = run(capsys, "plot", str(csv), "--x", "x", "--y", "z", "-o", str(tmp_path / "a.svg"))
    assert code == 1 and "'z'" in err


def test_custom_line_needs_endpoints(capsys):
    assert cli.main(["sweep", "--family", "custom-line"]) == 1


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nfamily = u1\nsteps = 3\n")
    code, out, _ = run(capsys, "--config", str(cfg), "sweep")
    assert code == 0 and len(out.splitlines()) == 4
    assert out.splitlines()[1].startswith("-0.95,-0.95,0.95,0.9")
    code, out, _ = run(capsys, "--config", str(cfg), "sweep", "--steps", "2")
    assert len(out.splitlines()) == 3


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("steps\n")
    assert cli.main(["--config", str(cfg), "sweep"]) == 1
    assert cli.main(["--config", str(tmp_path / "missing.cfg"), "sweep"]) == 1


def test_xxz_polarized(capsys):
    code, out, err = run(capsys, "xxz", "-L", "8", "--range", "1.1", "2.0", "--steps", "10")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == ",".join(cli.XXZ_COLUMNS)
    for line in rows[1:]:
        f = dict(zip(cli.XXZ_COLUMNS, line.split(",")))
        assert (f["QG"], f["CG"], f["TG"], f["status"]) == ("0", "1", "1", "ok")
    assert err.strip() == "# transitions"


def test_xxz_bad_chain(capsys):
    assert cli.main(["xxz", "-L", "7"]) == 1


def test_xxz_solver_failure_exit_code(tmp_path, capsys, monkeypatch):
    from qcorr import xxz

    real = xxz.ground_space

    def flaky(spec):
        if spec.delta > 0.4:
            raise xxz.SolverError("injected")
        return real(spec)

    monkeypatch.setattr(xxz, "ground_space", flaky)
    out = tmp_path / "x.csv"
    code = cli.main(["xxz", "-L", "6", "--range", "0", "0.5", "--steps", "6", "-o", str(out)])
    assert code == 3
    last = out.read_text().splitlines()[-1]
    assert last.endswith("error: injected") and ",ok" not in last


def test_verify_exit_code_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["verify", "--seed", "0", "--count", "100", "-o", str(a)]) == 0
    assert cli.main(["verify", "--seed", "0", "--count", "100", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert cli.main(["verify", "--count", "0"]) == 1
