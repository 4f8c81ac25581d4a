import json

import pytest

from mpm.cli import main

FPM_F = """fpm 1
field 2
params 2
rows 2
0 0
0 0
cols 3
1 4 : 1 1
3 3 : 1 1
4 1 : 1 1
"""

FPM_G = FPM_F.replace("3 3 :", "2 2 :")

BC_A = "0 2\n1 inf\n"
BC_B = "1 3\n1.5 inf\n"

CWF = """cwf 1
field 2
params 2
p 0 0 0 :
q 0 0 0 :
a 1 1 4 : p 1 q 1
b 1 3 3 : p 1 q 1
c 1 4 1 : p 1 q 1
"""


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [("f.fpm", FPM_F), ("g.fpm", FPM_G),
                       ("a.bc", BC_A), ("b.bc", BC_B), ("x.cwf", CWF)]:
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def test_wasserstein_command(files, capsys):
    assert main(["wasserstein", "--p", "1", files["a.bc"], files["b.bc"]]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "2.5"  # |0-1| + |2-3| + |1-1.5|
    assert main(["wasserstein", "--p", "1", "--exact", files["a.bc"], files["b.bc"]]) == 0
    assert capsys.readouterr().out.strip() == "2.5"


def test_wasserstein_json(files, capsys):
    assert main(["wasserstein", "--p", "inf", "--json",
                 files["a.bc"], files["b.bc"]]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["distance"] == 1.0


def test_barcode_along_line(files, capsys):
    assert main(["barcode", "--line", "1,1;0,0", files["f.fpm"]]) == 0
    assert capsys.readouterr().out == "0 3\n0 inf\n"


def test_restrict_roundtrip(files, capsys, tmp_path):
    out = tmp_path / "r.fpm"
    assert main(["restrict", "--line", "1,1;0,0", files["f.fpm"],
                 "-o", str(out)]) == 0
    text = out.read_text()
    assert "params 1" in text
    assert main(["barcode", str(out)]) == 0
    assert capsys.readouterr().out == "0 3\n0 inf\n"


def test_matchdist_json(files, capsys):
    assert main(["matchdist", "--p", "inf", "--eps", "0.05", "--json",
                 files["f.fpm"], files["g.fpm"]]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["upper"] - data["lower"] <= 0.05
    assert data["lower"] >= 0.95
    assert set(data["argmax_line"]) == {"v", "w"}


def test_matchdist_deterministic_output(files, capsys, monkeypatch):
    argv = ["matchdist", "--p", "1", "--eps", "0.1", "--json",
            files["f.fpm"], files["g.fpm"]]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    # byte-identical under parallel execution
    monkeypatch.setenv("MPM_THREADS", "4")
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_labeldist(files, capsys):
    assert main(["labeldist", "--p", "2", files["f.fpm"], files["g.fpm"]]) == 0
    assert abs(float(capsys.readouterr().out) - 2 ** 0.5) < 1e-9


def test_labeldist_rejects_different_matrices(files, capsys, tmp_path):
    other = tmp_path / "o.fpm"
    other.write_text("fpm 1\nfield 2\nparams 2\nrows 1\n0 0\ncols 0\n")
    assert main(["labeldist", "--p", "1", files["f.fpm"], str(other)]) == 2


def test_bounds_json(files, capsys):
    assert main(["bounds", "--p", "1", "--eps", "0.05", "--json",
                 files["f.fpm"], files["g.fpm"]]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lower"] <= data["upper"] + 0.05
    assert data["upper"] <= 2.0


def test_homology_pipeline(files, capsys, tmp_path):
    out = tmp_path / "h1.fpm"
    assert main(["homology", "--deg", "1", files["x.cwf"], "-o", str(out)]) == 0
    assert main(["barcode", "--line", "1,1;2,0", str(out)]) == 0
    assert capsys.readouterr().out == "3 inf\n4 inf\n"


def test_lift_roundtrip(files, capsys, tmp_path):
    prefix = str(tmp_path / "lifted")
    assert main(["lift", files["f.fpm"], files["g.fpm"], "-o", prefix]) == 0
    capsys.readouterr()
    assert main(["homology", "--deg", "1", prefix + ".f.cwf"]) == 0
    text = capsys.readouterr().out
    assert "params 2" in text


def test_hilbert(files, capsys):
    assert main(["hilbert", "--at", "2,2", "--at", "5,5", files["f.fpm"]]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines == ["2,2\t2", "5,5\t1"]


def test_gen_deterministic(capsys):
    assert main(["gen", "presentation", "--seed", "9"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "presentation", "--seed", "9"]) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("fpm 1")


def test_gen_complex_parses(capsys):
    assert main(["gen", "complex", "--seed", "3", "--vertices", "5"]) == 0
    from mpm import parse_complex
    parse_complex(capsys.readouterr().out)


def test_usage_error_exit_code(capsys, tmp_path):
    assert main(["wasserstein", "--p", "1"]) == 1  # missing positionals
    assert main(["nonsense"]) == 1
    bc = tmp_path / "x.bc"
    bc.write_text("0 1\n")
    assert main(["wasserstein", "--p", "zero", str(bc), str(bc)]) == 1
    assert main(["wasserstein", "--p", "0.5", str(bc), str(bc)]) == 1


def test_data_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.bc"
    bad.write_text("3 1\n")
    good = tmp_path / "ok.bc"
    good.write_text("0 1\n")
    assert main(["wasserstein", "--p", "1", str(bad), str(good)]) == 2
    assert main(["wasserstein", "--p", "1", str(tmp_path / "nope.bc"), str(good)]) == 2


def test_computation_failure_exit_code(files, capsys):
    code = main(["matchdist", "--p", "1", "--eps", "0.000001",
                 "--max-depth", "3", files["f.fpm"], files["g.fpm"]])
    assert code == 3
