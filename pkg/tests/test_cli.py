import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from polcoherence import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def parse_csv(text):
    lines = text.splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    return comments, [{k: float(v) for k, v in r.items()} for r in rows]


def test_sweep_fig2_columns(capsys):
    code, out = run(["sweep", "--xi", "0"], capsys)
    assert code == 0
    comments, rows = parse_csv(out)
    assert any("units" in c for c in comments)
    assert len(rows) == 361
    # emitted theta is rounded to 12 digits; use the exact grid
    for theta, r in zip(np.linspace(0, 2 * math.pi, 361), rows):
        assert abs(r["theta"] - theta) < 1e-10
        assert abs(r["r_ab"] - math.cos(theta) ** 2 / 4) < 1e-12
        assert abs(r["r_ad"] - math.sin(theta) ** 2 / 4) < 1e-12
        assert abs(r["total"] - 0.5) < 1e-12


def test_sweep_default_xi_family_peaks(capsys):
    code, out = run(["sweep", "--steps", "17"], capsys)  # theta in pi/8 steps
    _, rows = parse_csv(out)
    assert sorted({round(r["xi"], 9) for r in rows}) == sorted(round(x, 9) for x in cli.DEFAULT_XI)
    diag = [r for r in rows if abs(r["theta"] - r["xi"]) < 1e-9]
    assert len(diag) == 4
    assert all(abs(r["r_ab"] - 0.25) < 1e-12 for r in diag)
    assert all(abs(r["total"] - 0.5) < 1e-12 for r in rows)


def test_sweep_with_mc_columns(capsys):
    code, out = run(["sweep", "--steps", "5", "--xi", "0.1", "--n", "20000", "--seed", "3"], capsys)
    _, rows = parse_csv(out)
    for r in rows:
        assert abs(r["mc_r_ab"] - r["r_ab"]) <= 4 * r["mc_se_ab"] + 1e-12
        assert r["mc_n"] == 20000


def test_singles_washout_and_coherent_column(capsys):
    code, out = run(["singles", "--xi", "0", "--n", "1000000", "--steps", "9", "--seed", "1"], capsys)
    assert code == 0
    _, rows = parse_csv(out)
    for r in rows:
        for p in "ABCD":
            assert abs(r[f"mean_I{p}"] - 0.5) <= 4 * r[f"se_I{p}"] + 1e-12
        assert abs(r["total"] - 2.0) < 1e-12
    quarter = [r for r in rows if abs(r["theta"] - math.pi / 4) < 1e-9]
    assert quarter and abs(quarter[0]["coherent_IA"]) < 1e-12


def test_chsh_defaults(capsys):
    _, out = run(["chsh"], capsys)
    _, rows = parse_csv(out)
    assert abs(rows[0]["S"] - 2.8284271247) < 1e-10
    assert "2.82842712475" in out


def test_chsh_degenerate(capsys):
    _, out = run(["chsh", "--a", "0", "--a2", "0", "--b", "0", "--b2", "0"], capsys)
    _, rows = parse_csv(out)
    assert rows[0]["S"] == 2.0


def test_chsh_mc_reproducible(capsys):
    argv = ["chsh", "--mc", "--n", "1000000", "--seed", "42"]
    _, out1 = run(argv, capsys)
    _, out2 = run(argv, capsys)
    assert out1 == out2
    _, rows = parse_csv(out1)
    r = rows[0]
    assert abs(r["S_mc"] - 2 * math.sqrt(2)) < 4 * r["S_mc_stderr"]


def test_sample_command(capsys):
    argv = ["sample", "--theta", "0.3", "--xi", "0.3", "--n", "100000", "--seed", "9"]
    _, out1 = run(argv, capsys)
    _, out2 = run(argv, capsys)
    assert out1 == out2
    _, rows = parse_csv(out1)
    r = rows[0]
    assert r["n_ad"] == 0 and r["n_cb"] == 0 and r["n_total"] == 100000
    for k in ("p_d1", "p_d2", "p_d3", "p_d4"):
        assert abs(r[k] - 0.5) < 4 * math.sqrt(0.25 / 100000)


def test_degrees_flag(capsys):
    _, out = run(["sample", "--theta", "45", "--xi", "0", "--degrees", "--n", "10"], capsys)
    _, rows = parse_csv(out)
    assert rows[0]["theta"] == pytest.approx(math.pi / 4, abs=1e-11)
    assert rows[0]["exact_r_ab"] == pytest.approx(0.125, abs=1e-12)


def test_json_output(capsys):
    _, out = run(["sweep", "--steps", "3", "--xi", "0", "--format", "json"], capsys)
    payload = json.loads(out)
    assert payload["config"]["command"] == "sweep"
    assert len(payload["rows"]) == 3
    assert set(payload["rows"][0]) == {"theta", "xi", "r_ab", "r_ad", "r_cb", "r_cd", "total"}


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "chsh.csv"
    code, out = run(["chsh", "--out", str(dest)], capsys)
    assert code == 0 and out == ""
    assert "2.82842712475" in dest.read_text()


def test_i0_scaling(capsys):
    _, out = run(["sweep", "--steps", "2", "--xi", "0", "--i0", "2"], capsys)
    _, rows = parse_csv(out)
    assert all(abs(r["total"] - 2.0) < 1e-12 for r in rows)


@pytest.mark.parametrize("argv", [
    ["sweep", "--steps", "1"],
    ["sweep", "--xi"],
    ["sample", "--n", "0"],
    ["chsh", "--bogus", "1"],
    ["singles", "--i0", "-1"],
    ["frobnicate"],
    ["sweep", "--theta-start", "nan"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_internal_error_exit_1(monkeypatch, capsys):
    def boom(config):
        raise RuntimeError("kaput")

    monkeypatch.setitem(cli._DISPATCH, "chsh", boom)
    assert cli.main(["chsh"]) == 1
    assert "kaput" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polcoherence", "chsh"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "2.82842712475" in proc.stdout
