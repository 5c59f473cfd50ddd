import csv
import json

import pytest

from cubiclat.cli import main
from cubiclat.field import DEFAULT_POLY
from cubiclat.ideals import enumerate_ideal_tuples


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "--poly", "-1,-2,1", "--mod", "13")
    assert code == 0 and out.split() == ["3", "5", "6"]
    code, out, _ = run(capsys, "roots", "--mod", "49")
    assert code == 0 and out == ""


def test_ideals_csv(capsys, tmp_path):
    path = tmp_path / "ideals.csv"
    assert run(capsys, "ideals", "--max-norm", "13", "--out", str(path))[0] == 0
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["a", "m1", "mu1", "m2", "mu2", "lambda", "norm"]
    assert rows[1:] == [["1", "1", "0", "1", "0", "0", "1"], ["1", "1", "0", "7", "5", "3", "7"],
                        ["1", "1", "0", "13", "3", "4", "13"], ["1", "1", "0", "13", "5", "1", "13"],
                        ["1", "1", "0", "13", "6", "3", "13"]]


def test_units(capsys):
    code, out, _ = run(capsys, "units")
    assert code == 0
    assert "eps1 = " in out and "regulator = 2.1018" in out and out.count("C_D") == 1
    code, _, err = run(capsys, "units", "--eps1", "1,1,0", "--eps2", "2,-1,0")
    assert code == 2 and "norm -1" in err


def test_run_matches_ideal_enumeration(capsys, tmp_path):
    out, rep = tmp_path / "pts.csv", tmp_path / "rep.json"
    code, _, _ = run(capsys, "run", "--max-norm", "10000", "--out", str(out), "--report", str(rep))
    assert code == 0
    rows = list(csv.DictReader(open(out)))
    assert list(rows[0]) == "N,m1,mu1,m2,mu2,lambda,s1,s2,zx,zy,c1,c2,t".split(",")
    keys = sorted(tuple(int(r[k]) for k in ("m1", "mu1", "m2", "mu2", "lambda")) for r in rows)
    assert keys == sorted(I.key for I in enumerate_ideal_tuples(DEFAULT_POLY, 10000))
    js = json.load(open(rep))
    assert js["n"] == len(rows) and len(js["badlu"]) == 4


def test_run_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    ra, rb = tmp_path / "a.json", tmp_path / "b.json"
    for out, rep in ((a, ra), (b, rb)):
        assert run(capsys, "run", "--max-norm", "3000", "--seed", "7", "--out", str(out),
                   "--report", str(rep))[0] == 0
    assert a.read_bytes() == b.read_bytes() and ra.read_bytes() == rb.read_bytes()


def test_run_config_errors(capsys):
    code, _, err = run(capsys, "run", "--poly", "-1,-2,-8")
    assert code == 2 and "not totally real" in err
    code, _, err = run(capsys, "run", "--poly", "0,-4,-8", "--max-norm", "10")
    assert code == 2
    code, _, err = run(capsys, "run", "--poly", "0,0,-1")
    assert code == 2 and "reducible" in err
    code, _, err = run(capsys, "run", "--max-norm", "0")
    assert code == 2


def test_run_whole_ring_only(capsys):
    code, out, _ = run(capsys, "run", "--max-norm", "1")
    assert code == 0
    assert out.splitlines()[1] == "1,1,0,1,0,0,0,0,0,1,0,0,0"


def test_run_class_basis(capsys, tmp_path):
    # a principal ideal as class representative gives back the same ideal set
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "run", "--max-norm", "2000", "--out", str(a))[0] == 0
    assert run(capsys, "run", "--max-norm", "2000", "--class-basis", "3,0,1;-5,1,0;7,0,0",
               "--out", str(b))[0] == 0
    key = lambda r: tuple(r[1:6])  # noqa: E731
    ra = sorted(map(key, list(csv.reader(open(a)))[1:]))
    rb = sorted(map(key, list(csv.reader(open(b)))[1:]))
    assert ra == rb
    assert run(capsys, "run", "--class-basis", "2,0,0;0,1,0;0,0,1")[0] == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# desk run\nmax-norm = 50\npoly=-1,-2,1\ncusp-Y = 2\ncusp-Y = 4\n")
    code, out, _ = run(capsys, "run", "--config", str(cfg))
    assert code == 0 and len(out.splitlines()) == 16
    code, out, _ = run(capsys, "run", "--config", str(cfg), "--max-norm", "13")
    assert code == 0 and len(out.splitlines()) == 6
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    assert run(capsys, "run", "--config", str(bad))[0] == 2


def test_stats_subcommand(capsys, tmp_path):
    out = tmp_path / "pts.csv"
    assert run(capsys, "run", "--max-norm", "6000", "--out", str(out))[0] == 0
    code, text, _ = run(capsys, "stats", str(out), "--cusp-Y", "2")
    js = json.loads(text)
    assert code == 0 and js["cusp"][0]["Y"] == 2.0 and js["chi2"]["joint"]["dof"] == 255


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--max-norm", "3000")
    assert code == 0 and out.count("PASS") == 3
    code, out, _ = run(capsys, "verify", "--max-norm", "3000", "--inject-wrong-lambda")
    assert code == 1 and "FAIL lambda-closure" in out


def test_verify_ring_only_non_maximal(capsys):
    code, out, _ = run(capsys, "verify", "--poly", "-1,-2,-8", "--ring-only", "--max-norm", "2000")
    assert code == 0
    assert "not maximal at [2]" in out and "PASS obstruction" in out
    assert run(capsys, "verify", "--poly", "-1,-2,-8")[0] == 2


@pytest.mark.parametrize("argv", [["--version"], ["roots", "--help"]])
def test_help(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
