import subprocess
import sys

import pytest

from gfaccess import config as rc
from gfaccess.cli import DETECT_HEADER, SINR_HEADER, main
from gfaccess.reliability import SWEEP_HEADER


def run(*args):
    return main(list(args))


def read_csv(path):
    return path.read_text().splitlines()


def test_config_defaults():
    cfg = rc.RunConfig()
    assert (cfg.delta_f, cfg.t_s, cfg.n_r, cfg.n_e, cfg.k, cfg.n_d, cfg.taps, cfg.n_t) == (
        60e3, 17.86e-6, 512, 512, 3, 4, 6, 100)


def test_config_file_and_override(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nseed = 9\nsnr_db = 10.5\nexhaustive = no\n")
    cfg = rc.load(str(p), {"seed": "11", "trials": "1e3"})
    assert (cfg.seed, cfg.snr_db, cfg.exhaustive, cfg.trials) == (11, 10.5, False, 1000)


@pytest.mark.parametrize("text", ["nokey\n", "bogus = 1\n", "seed = abc\n"])
def test_config_errors(tmp_path, text):
    p = tmp_path / "bad.cfg"
    p.write_text(text)
    with pytest.raises(rc.ConfigError):
        rc.load(str(p))


def test_code_check_exit_codes(capsys):
    assert run("code-check", "--code_q", "3", "--code_t", "3") == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4 and "FAIL" not in out
    assert run("code-check", "--code_q", "2", "--code_t", "3") == 2
    assert "q=2 too small" in capsys.readouterr().err
    assert run("code-check", "--code_q", "5", "--code_k", "3", "--code_t", "2",
               "--exhaustive", "0", "--check_trials", "10000") == 0


def test_code_check_export(tmp_path):
    out = tmp_path / "m.txt"
    assert run("code-check", "--code_q", "3", "--code_t", "3", "--users", "3", "--out", str(out)) == 0
    assert out.read_text().splitlines()[0] == "3 2 3 12 9"


def test_detect_sim_ideal(tmp_path):
    out = tmp_path / "d.csv"
    assert run("detect-sim", "--trials", "300", "--out", str(out)) == 0
    lines = read_csv(out)
    assert lines[0] == DETECT_HEADER and len(lines) == 301
    assert all(x.endswith(",1") for x in lines[1:])
    modes = {x.split(",")[1] for x in lines[1:]}
    assert modes == {"none", "sc", "wb-pj", "pb-pj"}


def test_detect_sim_fixed_mode(tmp_path):
    out = tmp_path / "d.csv"
    assert run("detect-sim", "--trials", "50", "--attack", "pb-pj", "--out", str(out)) == 0
    rows = read_csv(out)[1:]
    assert all(r.split(",")[4] == "pb-pj" and r.endswith(",1") for r in rows)


@pytest.mark.slow
def test_detect_sim_eigen(tmp_path):
    out = tmp_path / "d.csv"
    assert run("detect-sim", "--trials", "100", "--count_mode", "eigen", "--calib_trials", "20000",
               "--pf", "1e-3", "--out", str(out)) == 0
    rows = read_csv(out)[1:]
    assert sum(r.endswith(",1") for r in rows) >= 95


def test_detect_sim_header_only(tmp_path):
    out = tmp_path / "d.csv"
    assert run("detect-sim", "--trials", "0", "--out", str(out)) == 0
    assert out.read_text() == DETECT_HEADER + "\n"


def test_detect_sim_bad_order():
    assert run("detect-sim", "--users", "4", "--code_t", "3") == 2


def test_sinr_validate(tmp_path):
    out = tmp_path / "s.csv"
    code = run("sinr-validate", "--trials", "300", "--sinr_n_t", "25,400", "--sinr_lams", "0,0.2,1e-9",
               "--out", str(out))
    rows = read_csv(out)
    assert rows[0] == SINR_HEADER and len(rows) == 7
    vals = [list(map(float, r.split(","))) for r in rows[1:]]
    assert vals[0][3] == pytest.approx(vals[4][3], rel=1e-8)  # lambda -> 0 matches lambda = 0
    assert code in (0, 1)


def test_tradeoff_latency_shape(tmp_path):
    out = tmp_path / "t.csv"
    assert run("tradeoff", "--which", "latency", "--out", str(out)) == 0
    rows = read_csv(out)
    assert rows[0] == SWEEP_HEADER
    pe = [float(r.split(",")[3]) for r in rows[1:]]
    assert all(b <= a for a, b in zip(pe, pe[1:]))
    assert pe[-1] == pe[-2]


def test_tradeoff_access_frontier(tmp_path):
    out = tmp_path / "t.csv"
    assert run("tradeoff", "--which", "access", "--m_d", "18", "--out", str(out)) == 0
    flags = [int(r.split(",")[-1]) for r in read_csv(out)[1:]]
    assert flags[0] == 1 and flags[-1] == 0
    first_bad = flags.index(0)
    assert not any(flags[first_bad:])


def test_tradeoff_empty_grid_and_bad_which(tmp_path):
    out = tmp_path / "t.csv"
    assert run("tradeoff", "--grid", "", "--out", str(out)) == 0
    assert out.read_text() == SWEEP_HEADER + "\n"
    assert run("tradeoff", "--which", "nope") == 2


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(rc.OUT_DIR_ENV, str(tmp_path))
    assert run("tradeoff", "--which", "access", "--out", "a.csv") == 0
    assert (tmp_path / "a.csv").exists()


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run("detect-sim", "--trials", "100", "--seed", "5", "--out", str(path)) == 0
    assert a.read_bytes() == b.read_bytes()
    for path in (a, b):
        assert run("sinr-validate", "--trials", "200", "--sinr_n_t", "25,50", "--seed", "5", "--out", str(path)) in (0, 1)
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gfaccess", "tradeoff", "--which", "access"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == SWEEP_HEADER
