from fractions import Fraction
import re
import subprocess
import sys

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from morsepacket import cli
from morsepacket.config import ConfigError, build_config, parse_time, read_config_file
from morsepacket.csvio import read_matrix, write_matrix, write_table

SCI = re.compile(r"^-?\d\.\d+e[+-]\d+$")


@pytest.mark.parametrize("text, fraction, absolute", [
    ("1/8", Fraction(1, 8), None),
    (" 3/8 ", Fraction(3, 8), None),
    ("0", Fraction(0), None),
    ("0/1", Fraction(0), None),
    ("1500.5", None, 1500.5),
])
def test_parse_time(text, fraction, absolute):
    tp = parse_time(text)
    assert tp.fraction == fraction
    assert tp.absolute == absolute


@pytest.mark.parametrize("text", ["2/8", "1/0", "-1/8", "a/b", "-3", "inf", "nan", "soon"])
def test_parse_time_rejects(text):
    with pytest.raises(ConfigError):
        parse_time(text)


@settings(max_examples=100)
@given(st.integers(1, 500), st.integers(1, 500))
def test_time_labels_round_trip(r, q):
    frac = Fraction(r, q)
    tp = parse_time(f"{frac.numerator}/{frac.denominator}")
    assert tp.resolve(8.0) == pytest.approx(8.0 * r / q)
    assert tp.label == f"Trev{frac.numerator}_{frac.denominator}"


def test_config_file_and_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# HI defaults with a coarser grid\nalpha = 1.4, 2.0\ngrid_points = 2048  # comment\n"
                    "time = 1/4\nprecision = 8\n", encoding="utf-8")
    values = read_config_file(path)
    cfg = build_config(values, {"grid_points": "1024", "alpha": None})
    assert cfg.alphas == (1.4, 2.0)
    assert cfg.grid_points == 1024
    assert cfg.precision == 8
    assert [str(t) for t in cfg.effective_times] == ["1/4 T_rev"]
    assert build_config().effective_times[1].fraction == Fraction(1, 8)


@pytest.mark.parametrize("content", ["colour = red\n", "alpha 1.4\n", "= 3\n"])
def test_config_file_strict(tmp_path, content):
    path = tmp_path / "bad.cfg"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError):
        read_config_file(path)


@pytest.mark.parametrize("overrides", [
    {"alpha": "-1"}, {"grid_points": "8"}, {"grid_points": "many"}, {"x_min": "5"},
    {"p_max": "0"}, {"precision": "40"}, {"D": "-0.1"}, {"mu": "1e-9"}, {"colour": "red"},
])
def test_build_config_rejects(overrides):
    with pytest.raises(ConfigError):
        build_config({}, overrides)


def test_custom_molecule(tmp_path):
    cfg = build_config({"D": "0.2", "beta": "1.5"}, {})
    assert cfg.params.D == 0.2 and cfg.params.beta == 1.5
    assert cfg.params.mu == 1819.99


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 5), st.integers(1, 17), st.integers(0, 2 ** 32 - 1))
def test_matrix_csv_round_trip(tmp_path_factory, rows, cols, precision, seed):
    rng = np.random.default_rng(seed)
    x, p, m = rng.normal(size=rows), rng.normal(size=cols), rng.normal(size=(rows, cols)) * 1e3
    path = tmp_path_factory.mktemp("csv") / "m.csv"
    write_matrix(path, x, p, m, precision)
    x2, p2, m2 = read_matrix(path)
    tol = 10.0 ** -precision
    assert np.allclose(x2, x, rtol=tol) and np.allclose(p2, p, rtol=tol) and np.allclose(m2, m, rtol=tol)


def test_table_format(tmp_path):
    path = write_table(tmp_path / "t.csv", ["a", "b"], [[1, 2], [0.5, -3e-20]], precision=4)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines == ["a,b", "1.0000e+00,5.0000e-01", "2.0000e+00,-3.0000e-20"]


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_spectrum_command(tmp_path, capsys):
    code, out = run(["spectrum", "--out", str(tmp_path), "--precision", "10"], capsys)
    assert code == 0
    assert "lambda = 29.60091261" in out.out
    assert "n_max = 29 (30 bound levels)" in out.out
    lines = (tmp_path / "levels.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,E_n,s_n"
    assert len(lines) == 31
    fields = [f for line in lines[1:] for f in line.split(",")]
    assert all(SCI.match(f) and len(f.split("e")[0].split(".")[1]) == 10 for f in fields)


def test_spectrum_reports_truncated_levels(tmp_path, capsys):
    code, out = run(["spectrum", "--eigenfunctions", "--grid-points", "256", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "not contained in the grid" in out.out
    header = (tmp_path / "eigenfunctions.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header.split(",")[:2] == ["x", "psi_0"] and header.endswith("psi_29")


def test_coefficients_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        code, _ = run(["coefficients", "--alpha", "1.4", "--alpha", "2.5", "--out", str(tmp_path / name)], capsys)
        assert code == 0
        outs.append((tmp_path / name / "dm.csv").read_bytes())
    assert outs[0] == outs[1]
    rows = outs[0].decode().splitlines()
    assert rows[0] == "alpha,m,re_d,im_d,abs_d_sq" and len(rows) == 61


def test_evolve_writes_named_densities(tmp_path, capsys):
    code, _ = run(["evolve", "--alpha", "1.4", "--time", "1/4", "--time", "100", "--grid-points", "1024",
                   "--out", str(tmp_path), "--plot"], capsys)
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["density_alpha1.4.png", "density_alpha1.4_Trev1_4.csv", "density_alpha1.4_t100.csv"]


def test_wigner_command_small(tmp_path, capsys):
    code, out = run(["wigner", "--alpha", "2.5", "--grid-points", "1024", "--p-points", "64",
                     "--stride", "4", "--out", str(tmp_path)], capsys)
    assert code == 0, out.err
    assert "alpha = 2.5" in out.out
    x, p, w = read_matrix(tmp_path / "W_total_alpha2.5.csv")
    assert x.size == 256 and p.size == 64 and w.shape == (256, 64)
    for part in ("even", "odd", "int"):
        assert (tmp_path / f"W_{part}_alpha2.5.csv").exists()
    assert (tmp_path / "moments.csv").read_text().startswith("alpha,mean_x,mean_p,sigma_x,sigma_p,dx_dp,")


@pytest.mark.parametrize("argv", [
    ["evolve", "--alpha", "-1"],
    ["evolve", "--time", "2/4"],
    ["spectrum", "--grid-points", "4"],
    ["spectrum", "--bogus"],
    ["frobnicate"],
    ["wigner", "--stride", "0"],
    ["spectrum", "--D", "1"],
])
def test_validation_exit_code(tmp_path, capsys, argv):
    code, out = run(argv + ["--out", str(tmp_path)] if argv[0] != "frobnicate" else argv, capsys)
    assert code == cli.EXIT_VALIDATION
    assert out.err.strip()


def test_numerical_exit_code(tmp_path, capsys):
    # alpha = 0 puts all weight on the least-bound level, which overflows the default grid
    code, out = run(["evolve", "--alpha", "0", "--out", str(tmp_path)], capsys)
    assert code == cli.EXIT_NUMERICAL
    assert "not decayed" in out.err


def test_io_exit_codes(tmp_path, capsys):
    code, _ = run(["spectrum", "--config", str(tmp_path / "missing.cfg")], capsys)
    assert code == cli.EXIT_IO
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _ = run(["spectrum", "--out", str(blocker / "sub")], capsys)
    assert code == cli.EXIT_IO


def test_report_flags_coarse_grid(tmp_path, capsys):
    code, out = run(["report", "--grid-points", "128", "--no-figures", "--out", str(tmp_path)], capsys)
    assert code == cli.EXIT_NUMERICAL
    text = (tmp_path / "report.txt").read_text(encoding="utf-8")
    assert "[FAIL]" in text and "FAILURES" in text
    assert out.out.endswith(text)


@pytest.mark.slow
def test_report_full_run(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "morsepacket", "report", "--out", str(tmp_path)],
                          capture_output=True, text=True, timeout=900)
    assert proc.returncode == 0, proc.stdout[-3000:] + proc.stderr
    assert "ALL PASS" in proc.stdout
    assert "[FAIL]" not in proc.stdout
    for name in ("report.txt", "levels.csv", "dm.csv", "dm.png", "moments.csv", "wigner_parts.png",
                 "density_alpha1.4.png", "density_alpha2.5_Trev1_8.csv"):
        assert (tmp_path / name).is_file(), name
