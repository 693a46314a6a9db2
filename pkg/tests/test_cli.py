import csv
import io
import subprocess
import sys

import pytest

from matrixless_toeplitz import harness
from matrixless_toeplitz.cli import build_parser, main


@pytest.fixture(scope="module")
def cache_file(tmp_path_factory, cache):
    path = tmp_path_factory.mktemp("cli") / "cache.json"
    harness.write_cache(cache, path)
    return path


def test_parser_flags():
    args = build_parser().parse_args(
        ["precompute", "--alpha", "0.6", "--f", "1,0.5", "--n1", "80", "--levels-inner", "6",
         "--levels-extreme", "5", "--j0", "40", "--precision", "extended", "--cache", "x.json"]
    )
    assert args.alpha == 0.6 and args.f == (1 + 0j, 0.5 + 0j) and args.n1 == 80
    args = build_parser().parse_args(["approx", "--cache", "c", "--n", "300,400", "--eps", "1/30"])
    assert args.n == [300, 400] and str(args.eps) == "1/30"


def test_approx_to_stdout(cache_file, capsys):
    assert main(["approx", "--cache", str(cache_file), "--n", "200", "--k", "4"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["j", "re(lambda)", "im(lambda)", "regime"]
    assert len(rows) == 201
    assert rows[1][3] == "extreme-low" and rows[100][3] == "inner" and rows[-1][3] == "extreme-high"


def test_approx_to_files(cache_file, tmp_path):
    out = tmp_path / "eig.csv"
    assert main(["approx", "--cache", str(cache_file), "--n", "150 250", "--out", str(out)]) == 0
    assert (tmp_path / "eig_n150.csv").read_text().count("\n") == 151
    assert (tmp_path / "eig_n250.csv").exists()


def test_validate(cache_file, capsys):
    assert main(["validate", "--cache", str(cache_file), "--n", "64"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") == 4


def test_errors_subcommand(cache_file, tmp_path, capsys):
    code = main(["errors", "--cache", str(cache_file), "--n", "256", "--k", "2",
                 "--out", str(tmp_path)])
    assert code == 0
    assert "AE_max" in capsys.readouterr().out
    assert (tmp_path / "table.csv").exists()


def test_module_entry_point(cache_file, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "matrixless_toeplitz", "approx", "--cache", str(cache_file),
         "--n", "120"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.startswith("j,re(lambda),im(lambda),regime\n")


def test_precompute_writes_cache(tmp_path, capsys):
    path = tmp_path / "small.json"
    code = main(["precompute", "--n1", "40", "--levels-inner", "4", "--levels-extreme", "3",
                 "--j0", "20", "--cache", str(path)])
    assert code == 0
    back = harness.read_cache(path)
    assert back.inner.grid_values.shape == (3, 40) and back.extreme.q_low.shape == (20, 3)
