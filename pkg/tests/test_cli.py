import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from nwvoa import cli
from nwvoa.exact import BigradedSeries
from nwvoa.frame_io import dump_frame
from nwvoa.reports import SCHEMA, canonical, emit_report, record, render_report


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_empty_report():
    assert render_report([]) == "[]"


def test_single_passing_record(tmp_path):
    path = tmp_path / "r.json"
    emit_report([record("s", "one", True)], path)
    data = json.loads(path.read_text())
    assert len(data) == 1 and data[0]["pass"] is True and data[0]["schema"] == SCHEMA


def test_fractions_are_strings_and_floats_rejected():
    assert canonical({"v": F(-2, 6)}) == {"v": "-1/3"}
    with pytest.raises(TypeError):
        canonical({"v": 0.5})


def test_parse_rational():
    assert cli.parse_rational("-2/3") == F(-2, 3)
    for bad in ("0.5", "1e3", "1/0", "x"):
        with pytest.raises(cli.ParamError):
            cli.parse_rational(bad)


def test_classify_label(capsys):
    code, out, _ = run(["--suite", "classify", "--param", "x=3", "--param", "y=2", "--param", "lambda=1/3"], capsys)
    assert code == 0
    (rec,) = [r for r in json.loads(out) if r["name"] == "classify"]
    assert rec["detail"] == "Ê_{2,[1/3],4}"
    assert rec["lambda"] == "1/3"


def test_kernel_profile_small(capsys):
    code, out, _ = run(["--suite", "kernel-profile", "--max-weight", "2", "--charge-window", "2"], capsys)
    assert code == 0
    recs = json.loads(out)
    dims = {tuple(r["bidegree"]): r["dim_ker"] for r in recs if r["name"] == "dim_ker"}
    assert dims[(2, 0)] == 6 and len(dims) == 15


def test_injected_failure_reports_witness(monkeypatch, capsys):
    real = cli.nw.pbw_character

    def broken(n):
        s = real(n)
        terms = dict(s.terms)
        terms[(1, 0)] += 1
        return BigradedSeries(s.offset, terms, s.max_h)

    monkeypatch.setattr(cli.nw, "pbw_character", broken)
    code, out, _ = run(["--suite", "kernel-profile", "--max-weight", "1", "--charge-window", "1"], capsys)
    assert code == 1
    (bad,) = [r for r in json.loads(out) if not r["pass"]]
    assert bad["bidegree"] == [1, 0]
    assert bad["dim_source"] == 3 and bad["dim_target"] == 1
    assert bad["dim_ker"] == 2 and bad["expected"] == 3


def test_internal_error_exit(monkeypatch, capsys):
    def boom(cfg):
        raise RuntimeError("assertion")

    monkeypatch.setitem(cli.SUITES, "classify", boom)
    assert run(["--suite", "classify"], capsys)[0] == 3


@pytest.mark.parametrize("argv", [
    ["--suite", "nope"],
    ["--suite", "classify", "--param", "x=0.5"],
    ["--suite", "classify", "--param", "mu=1"],
    ["--suite", "classify", "--max-weight", "-1"],
    ["--suite", "log-rank", "--param", "x=3", "--param", "y=2", "--param", "lambda=1/3"],
    ["--suite", "log-rank", "--param", "x=1/2"],
])
def test_bad_parameters(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_io_errors(tmp_path, capsys):
    assert run(["--suite", "classify", "--out", str(tmp_path / "no" / "r.json")], capsys)[0] == 4
    assert run(["--suite", "classify", "--frame", str(tmp_path / "missing.ini")], capsys)[0] == 4
    bad = tmp_path / "bad.ini"
    bad.write_text("[frame]\ngenerators = a\n")
    assert run(["--suite", "classify", "--frame", str(bad)], capsys)[0] == 2


def test_frame_file_accepted(frame, tmp_path, capsys):
    path = tmp_path / "f.ini"
    dump_frame(frame, path)
    code, _, _ = run(["--suite", "relaxed-actions", "--charge-window", "1", "--frame", str(path)], capsys)
    assert code == 0


def test_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(["--suite", "hvir-singular", "--out", str(p)], capsys)[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nwvoa", "--suite", "classify"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)[0]["suite"] == "classify"
