import json
import math
import os

import pytest

from mventropy.cli import main
from mventropy.report import CSV_HEADER, from_profile, spec_hash
from mventropy import profile

from conftest import seq_of

SPEC = """
[space]
points = a b
metric = 0 1 ; 1 0
[maps]
full = a: a b ; b: a b
[schedule]
cycle = full
[analysis]
kinds = KT_SEP
eps = 0.5
n_max = 8
mode = exact
"""


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / "sys.spec"
    path.write_text(SPEC)
    return str(path)


def test_report_rows_and_format(two_pt):
    full = seq_of(two_pt, [(0, 1), (0, 1)])
    prof = profile(full, kinds=("KT_SEP",), eps_grid=[0.5], n_max=4)
    rep = from_profile(prof)
    csv = rep.to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == CSV_HEADER == "kind,p,eps,n,count,rate,bound"
    assert len(lines) == 1 + 4
    assert lines[1] == "KT_SEP,0,0.500000,1,2,0.693147,EXACT"
    doc = json.loads(rep.to_json())
    assert doc["headlines"]["KT_SEP"]["rate"] == "0.693147"


def test_cmd_analyze_writes_report(spec_file, capsys):
    out = spec_file.rsplit(".", 1)[0]
    assert main(["analyze", spec_file, "-o", out]) == 0
    csv = open(out + ".csv").read()
    assert csv.startswith(CSV_HEADER)
    assert "0.693147" in csv
    doc = json.loads(open(out + ".json").read())
    assert doc["metadata"]["spec_hash"] == spec_hash(SPEC)


def test_cmd_analyze_deterministic(spec_file):
    base = spec_file.rsplit(".", 1)[0]
    main(["analyze", spec_file, "-o", base + "_1"])
    main(["analyze", spec_file, "-o", base + "_2"])
    for suffix in (".csv", ".json"):
        b1 = open(base + "_1" + suffix, "rb").read()
        b2 = open(base + "_2" + suffix, "rb").read()
        assert b1 == b2


def test_cmd_analyze_figures(spec_file):
    base = spec_file.rsplit(".", 1)[0]
    assert main(["analyze", spec_file, "-o", base]) == 0
    assert not os.path.exists(base + "_kt_sep.png")   # opt-in only
    assert main(["analyze", spec_file, "-o", base, "--figures"]) == 0
    assert os.path.exists(base + "_kt_sep.png")


def test_exit_code_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text("[space]\nnot a kv line\n")
    assert main(["analyze", str(bad)]) == 1
    assert "line" in capsys.readouterr().err


def test_exit_code_resolution_error(tmp_path):
    s = tmp_path / "r.spec"
    s.write_text("[space]\npoints = a\nmetric = 0\n[maps]\nm = a: a\n"
                 "[schedule]\ncycle = ghost\n")
    assert main(["analyze", str(s)]) == 1


def test_exit_code_validation_error(tmp_path):
    s = tmp_path / "v.spec"
    s.write_text("[space]\npoints = a b c\nmetric = 0 1 5 ; 1 0 1 ; 5 1 0\n"
                 "[maps]\nm = a: a ; b: b ; c: c\n[schedule]\ncycle = m\n")
    assert main(["analyze", str(s)]) == 2


def test_exit_code_resources(tmp_path):
    # 13-point space exceeds the hyperspace cap
    k = 13
    pts = " ".join("p%d" % i for i in range(k))
    rows = " ; ".join(" ".join("0" if i == j else "1" for j in range(k))
                      for i in range(k))
    maps = " ; ".join("p%d: p%d" % (i, i) for i in range(k))
    s = tmp_path / "h.spec"
    s.write_text("[space]\npoints = %s\nmetric = %s\n[maps]\nm = %s\n"
                 "[schedule]\ncycle = m\n" % (pts, rows, maps))
    assert main(["hyper", str(s), "--eps", "0.5", "--n-max", "2"]) == 3


def test_cmd_verify_clean_and_deterministic(capsys):
    assert main(["verify", "--count", "5"]) == 0
    out1 = capsys.readouterr().out
    assert main(["verify", "--count", "5"]) == 0
    out2 = capsys.readouterr().out
    assert out1 == out2
    assert "all laws hold" in out1


def test_cmd_hyper_pass(spec_file, capsys):
    assert main(["hyper", spec_file, "--n-max", "3"]) == 0
    out = capsys.readouterr().out
    assert "verdict: PASS" in out


def test_cmd_example_shift2(capsys):
    assert main(["example", "shift2"]) == 0
    assert "PASS" in capsys.readouterr().out
