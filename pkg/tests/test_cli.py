import json

import numpy as np
import pytest

from shortops.cli import main
from shortops.matio import dumps_matrix, load_matrix


@pytest.fixture
def files(tmp_path):
    def write(name, m):
        path = tmp_path / name
        path.write_text(dumps_matrix(np.asarray(m, dtype=float)))
        return str(path)

    return tmp_path, write


def test_pinv_roundtrip(files, capsys):
    tmp, write = files
    src = write("m.csv", [[2.0, 0.0], [0.0, 0.0]])
    out = str(tmp / "out.csv")
    assert main(["pinv", "--matrix", src, "--out", out]) == 0
    assert np.allclose(load_matrix(out), [[0.5, 0.0], [0.0, 0.0]])


def test_pinv_to_stdout(files, capsys):
    _, write = files
    src = write("m.csv", [[2.0, 0.0], [0.0, 0.0]])
    assert main(["pinv", "--matrix", src]) == 0
    text = capsys.readouterr().out
    assert np.allclose(np.array([[float(v) for v in ln.split(",")] for ln in text.strip().splitlines()]),
                       [[0.5, 0.0], [0.0, 0.0]])


def test_shorted_both_methods(files, capsys):
    tmp, write = files
    a = write("a.csv", [[2.0, 1.0], [1.0, 1.0]])
    s = write("s.csv", [[1.0], [0.0]])
    out = str(tmp / "out.csv")
    assert main(["shorted", "--matrix", a, "--subspace", s, "--method", "both", "--out", out]) == 0
    assert np.allclose(load_matrix(out), [[1.0, 0.0], [0.0, 0.0]], atol=1e-10)
    assert "agreement residual" in capsys.readouterr().err


def test_parallel(files):
    tmp, write = files
    a = write("a.csv", np.eye(2))
    b = write("b.csv", np.eye(2))
    out = str(tmp / "p.csv")
    assert main(["parallel", "--a", a, "--b", b, "--out", out]) == 0
    assert np.allclose(load_matrix(out), 0.5 * np.eye(2))


def test_parallel_rejects_indefinite(files, capsys):
    tmp, write = files
    a = write("a.csv", [[1.0, 0.0], [0.0, -1.0]])
    b = write("b.csv", np.eye(2))
    assert main(["parallel", "--a", a, "--b", b]) == 2


def test_ffsum_success_and_precondition(files, capsys):
    tmp, write = files
    da = write("da.csv", [[1.0, 0.0], [0.0, 0.0]])
    db = write("db.csv", [[0.0, 0.0], [0.0, 1.0]])
    out = str(tmp / "x.csv")
    assert main(["ffsum", "--a", da, "--b", db, "--out", out]) == 0
    assert np.allclose(load_matrix(out), np.eye(2))
    assert main(["ffsum", "--a", da, "--b", da]) == 2
    assert "ranges_disjoint" in capsys.readouterr().err


def test_compat_report(files, capsys):
    _, write = files
    a = write("a.csv", [[1.0, 0.0], [0.0, 0.0]])
    s = write("s.csv", [[1.0], [1.0]])
    assert main(["compat", "--matrix", a, "--subspace", s]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report == {
        "compatible": True,
        "via_decomposition": True,
        "via_projected_ranges": True,
        "via_shorted": True,
    }


def test_rangeadd_report_key_order(files, capsys):
    _, write = files
    a = write("a.csv", [[1.0, 1.0], [1.0, 1.0]])
    b = write("b.csv", [[1.0, 0.0], [1.0, 0.0]])
    assert main(["rangeadd", "--a", a, "--b", b]) == 0
    report = json.loads(capsys.readouterr().out)
    assert list(report) == [
        "additive",
        "cond_contains_a",
        "cond_contains_b",
        "cond_contains_diff",
        "intersection_dim",
        "preimage_cover",
        "adjoint_additive",
    ]
    assert report["additive"] and not report["adjoint_additive"]


def test_parse_error_exit_code(files, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,zzz\n")
    assert main(["pinv", "--matrix", str(bad)]) == 3
    assert main(["pinv", "--matrix", str(tmp_path / "missing.csv")]) == 3


def test_shape_error_exit_code(files):
    _, write = files
    a = write("a.csv", np.eye(2))
    b = write("b.csv", np.eye(3))
    assert main(["rangeadd", "--a", a, "--b", b]) == 3


def test_verify_deterministic_modulo_elapsed(files, capsys):
    assert main(["verify", "--suite", "core", "--trials", "5", "--dims", "2..5",
                 "--seed", "9"]) == 0
    first = json.loads(capsys.readouterr().out)
    assert main(["verify", "--suite", "core", "--trials", "5", "--dims", "2..5",
                 "--seed", "9"]) == 0
    second = json.loads(capsys.readouterr().out)
    first.pop("elapsed_ms"), second.pop("elapsed_ms")
    assert first == second
    assert first["failures"] == []
    assert list(first) == ["suite", "trials", "dims", "seed", "failures"]


def test_verify_unknown_suite(capsys):
    assert main(["verify", "--suite", "nosuch"]) == 3


def test_verify_zero_trials(capsys):
    assert main(["verify", "--suite", "ff-oracle", "--trials", "0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["trials"] == 0 and report["failures"] == []


def test_verify_bad_dims(capsys):
    assert main(["verify", "--suite", "core", "--trials", "1", "--dims", "nope"]) == 3


def test_env_seed_fallback(files, capsys, monkeypatch):
    monkeypatch.setenv("SHORTCTL_SEED", "123")
    assert main(["verify", "--suite", "core", "--trials", "2", "--dims", "2..4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["seed"] == 123


def test_bench_report(files, tmp_path, capsys):
    out = str(tmp_path / "bench.json")
    assert main(["bench", "--dims", "4,6", "--trials", "3", "--seed", "1",
                 "--out", out]) == 0
    blocks = json.loads(open(out).read())
    assert [b["dim"] for b in blocks] == [4, 6]
    assert all(len(b["ff_ns"]) == 3 for b in blocks)
    assert all(b["max_rel_error"] <= 1e-9 for b in blocks)


def test_bench_unwritable_out(files):
    assert main(["bench", "--dims", "4", "--trials", "1",
                 "--out", "/nonexistent-dir/x.json"]) == 3


def test_tolerance_flags(files, capsys):
    _, write = files
    # relative cutoff 0.009 truncates the 1e-3 singular value
    src = write("m.csv", [[1.0, 0.0], [0.0, 1e-3]])
    assert main(["--tol-rank", "0.009", "pinv", "--matrix", src]) == 0
    out = capsys.readouterr().out
    assert np.allclose(
        np.array([[float(v) for v in ln.split(",")] for ln in out.strip().splitlines()]),
        [[1.0, 0.0], [0.0, 0.0]],
    )
    assert main(["--tol-angle", "1e-3", "compat", "--matrix", src, "--subspace", src]) == 0


def test_tolerance_flag_validation(files):
    _, write = files
    src = write("m.csv", np.eye(2))
    assert main(["--tol-rank", "0.5", "pinv", "--matrix", src]) == 3
