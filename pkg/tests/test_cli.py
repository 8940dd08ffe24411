import json

import numpy as np
import pytest

from hodge3d.cli import main
from hodge3d.fieldio import read_field, write_field
from hodge3d.grid import ScalarField, VectorField, make_centered_grid


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def gen(field, part, n=17, L=4.0, out=None):
    out = out or f"{field}-{part}.fld"
    assert main(["gen", field, "--part", part, "--n", str(n), "--L", str(L), "-o", out]) == 0
    return out


def test_reconstruct_zero_inputs(workdir):
    g = make_centered_grid(9, 2.0)
    write_field(VectorField(g, np.zeros((3,) + g.shape)), "a.fld")
    write_field(ScalarField(g, np.zeros(g.shape)), "f.fld")
    assert main(["reconstruct", "--curl", "a.fld", "--div", "f.fld", "-o", "A.fld"]) == 0
    assert not read_field("A.fld").values.any()
    diag = json.load(open("A.fld.json"))
    assert diag["backend"] == "fft-conv"


def test_reconstruct_alternative_and_direct(workdir):
    a, f = gen("mixed", "curl", n=9, L=3.0), gen("mixed", "div", n=9, L=3.0)
    assert main(["reconstruct", "--curl", a, "--div", f, "-o", "x.fld", "--backend", "direct",
                 "--json-diagnostics", "d.json"]) == 0
    assert main(["reconstruct", "--curl", a, "--div", f, "-o", "y.fld", "--alternative"]) == 0
    assert json.load(open("d.json"))["backend"] == "direct"
    assert np.isfinite(read_field("y.fld").values).all()


def test_decompose_writes_outputs_and_json(workdir):
    A = gen("mixed", "field")
    assert main(["decompose", A, "-o", "u.fld,B.fld", "--json-diagnostics", "diag.json"]) == 0
    diag = json.load(open("diag.json"))
    assert set(diag) == {"orthogonality", "div_B_inf", "curl_gradu_inf", "recomposition_rel_l2"}
    assert read_field("u.fld").kind == "scalar"
    assert read_field("B.fld").kind == "vector"


def test_decompose_strict_slow_decay_exit_2(workdir, capsys):
    A = gen("slow-decay", "field")
    assert main(["decompose", A, "-o", "u.fld,B.fld", "--strict"]) == 2
    assert "decay" in capsys.readouterr().err


def test_decompose_strict_diagnostic_violation_exit_2(workdir):
    A = gen("mixed", "field", n=17, L=4.0)  # recomposition error ~0.28 at this resolution
    assert main(["decompose", A, "-o", "u.fld,B.fld", "--strict"]) == 2


def test_decompose_slow_decay_waived(workdir):
    A = gen("slow-decay", "field")
    assert main(["decompose", A, "-o", "u.fld,B.fld"]) == 1
    assert main(["decompose", A, "-o", "u.fld,B.fld", "--allow-slow-decay"]) == 0


def test_bounded(workdir):
    a, f, A = gen("mixed", "curl", L=2.0), gen("mixed", "div", L=2.0), gen("mixed", "field", L=2.0)
    assert main(["bounded", "--curl", a, "--div", f, "--trace", A, "--tol", "1e-10", "-o", "R.fld"]) == 0
    diag = json.load(open("R.fld.json"))
    assert max(diag["relative_residual"]) <= 1e-10
    err = np.abs(read_field("R.fld").values - read_field(A).values).max()
    assert err < 0.05


def test_verify_decay(capsys):
    assert main(["verify", "decay", "--gamma", "4", "--rho", "2"]) == 0
    out = capsys.readouterr().out
    assert "3.926990817" in out and "PASS" in out
    assert main(["verify", "decay", "--gamma", "3", "--rho", "2"]) == 1


def test_verify_identities_and_roundtrip(workdir):
    assert main(["verify", "identities", "--n", "17", "--count", "3", "--json-diagnostics", "i.json"]) == 0
    assert json.load(open("i.json"))["pass"] is True
    assert main(["verify", "roundtrip", "--field", "gradient", "--n", "17", "--L", "4"]) == 0
    assert main(["verify", "roundtrip", "--field", "gradient", "--n", "17", "--L", "4",
                 "--max-error", "0.01"]) == 2


def test_export_vtk(workdir):
    A = gen("solenoidal", "field", n=5, L=1.0)
    assert main(["export-vtk", A, "A.vtk"]) == 0
    assert "VECTORS" in open("A.vtk").read()


# the three error classes -> exit 1

def test_malformed_file_exit_1(workdir, capsys):
    head = b"HHK1\nkind vector\nn 3\n"
    open("bad.fld", "wb").write(head + b"h oops\norigin 0 0 0\ngamma none\nc none\ndata\n")
    open("f.fld", "wb").write(b"")
    assert main(["reconstruct", "--curl", "bad.fld", "--div", "f.fld", "-o", "A.fld"]) == 1
    assert f"byte offset {len(head)}" in capsys.readouterr().err


def test_grid_mismatch_exit_1(workdir, capsys):
    a = gen("mixed", "curl", n=9, L=2.0)
    f = gen("mixed", "div", n=9, L=3.0)
    assert main(["reconstruct", "--curl", a, "--div", f, "-o", "A.fld"]) == 1
    assert "grid mismatch" in capsys.readouterr().err


def test_unknown_backend_exit_1(workdir, capsys):
    a, f = gen("mixed", "curl", n=9), gen("mixed", "div", n=9)
    assert main(["reconstruct", "--curl", a, "--div", f, "-o", "A.fld", "--backend", "fmm"]) == 1
    assert "unknown backend" in capsys.readouterr().err


def test_missing_file_exit_1(workdir):
    assert main(["export-vtk", "nope.fld", "x.vtk"]) == 1


def test_exit_codes_deterministic(workdir):
    A = gen("slow-decay", "field")
    codes = {main(["decompose", A, "-o", "u.fld,B.fld", "--strict"]) for _ in range(3)}
    assert codes == {2}
