import json

import pytest

from shortops.generators import mix_seed
from shortops.verify import SUITE_NAMES, run_suite


def test_suite_names():
    assert set(SUITE_NAMES) == {
        "core", "subspace", "projections", "shorted", "ranges", "ff-oracle", "all",
    }


@pytest.mark.parametrize("suite", [s for s in SUITE_NAMES if s != "all"])
def test_each_suite_passes_smoke(suite):
    report = run_suite(suite, trials=10, dims=(2, 8), seed=1234)
    assert report.passed, report.failures
    assert report.suite == suite
    assert report.trials == 10
    assert report.dims == "2..8"


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nosuch", trials=1)


def test_bad_dims():
    with pytest.raises(ValueError):
        run_suite("core", trials=1, dims=(0, 4))


def test_zero_trials_empty_pass():
    report = run_suite("all", trials=0, seed=7)
    assert report.passed and report.trials == 0


def test_report_dict_key_order_and_json():
    report = run_suite("core", trials=3, dims=(2, 4), seed=5)
    payload = report.to_dict()
    assert list(payload) == ["suite", "trials", "dims", "seed", "failures", "elapsed_ms"]
    json.dumps(payload)


def test_determinism_modulo_elapsed():
    a = run_suite("subspace", trials=8, dims=(2, 6), seed=99).to_dict()
    b = run_suite("subspace", trials=8, dims=(2, 6), seed=99).to_dict()
    a.pop("elapsed_ms"), b.pop("elapsed_ms")
    assert json.dumps(a) == json.dumps(b)


def test_mix_seed_is_stable():
    # frozen values pin the cross-platform seed derivation
    assert mix_seed(0, 0) == 16294208416658607535
    assert mix_seed(0, 1) == 7960286522194355700
    assert mix_seed(42, 0) == 13679457532755275413
    assert mix_seed(42, 0) != mix_seed(42, 1) != mix_seed(43, 1)
    assert all(0 <= mix_seed(1, i) < 2**64 for i in range(100))
