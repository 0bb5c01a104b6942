import json

import numpy as np
import pytest

from shortops.core import pinv
from shortops.errors import PreconditionViolated, ShapeMismatchError
from shortops.generators import overlapping_adjoint_pair, rank_additive_pair
from shortops.pinv_sum import (
    BenchBlock,
    bench_update_vs_recompute,
    pinv_sum,
    pinv_sum_left,
    pinv_sum_precheck,
    pinv_sum_residuals,
    pinv_sum_right,
)
from shortops.subspaces import nullspace_of, range_of

from helpers import op_norm


FIX_A = np.ones((2, 2))
FIX_B = np.array([[1.0, 0.0], [1.0, 0.0]])
DA = np.diag([1.0, 0.0])
DB = np.diag([0.0, 1.0])


class TestPrecheck:
    def test_fixture_fails_on_range_overlap(self):
        rep = pinv_sum_precheck(FIX_A, FIX_B)
        assert not rep.ranges_disjoint
        assert rep.adjoint_ranges_disjoint
        assert rep.additive and not rep.adjoint_additive
        assert not rep.rank_additive
        assert rep.first_failure() == "ranges_disjoint"

    def test_diagonal_pair_all_true(self):
        rep = pinv_sum_precheck(DA, DB)
        assert rep.all_hold()
        assert rep.first_failure() is None

    def test_zero_summand_all_true(self):
        rng = np.random.default_rng(2)
        b = rng.standard_normal((3, 3))
        assert pinv_sum_precheck(np.zeros((3, 3)), b).all_hold()

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            pinv_sum_precheck(np.eye(2), np.eye(3))


class TestCorrections:
    def test_coordinate_case(self):
        left = pinv_sum_left(DA, DB)
        right = pinv_sum_right(DA, DB)
        assert np.allclose(left.matrix, DB)
        assert np.allclose(right.matrix, DB)

    def test_left_on_fixture_pair(self):
        # the left identification needs only the adjoint-side hypothesis,
        # which the fixture satisfies
        left = pinv_sum_left(FIX_A, FIX_B)
        assert np.allclose(left.matrix @ left.matrix, left.matrix)
        assert left.nullsp.equals(nullspace_of(FIX_B))
        expected_range = range_of(
            nullspace_of(FIX_A).projector() @ nullspace_of(FIX_B).complement().projector()
        )
        assert left.range.equals(expected_range)

    def test_right_rejects_fixture_pair(self):
        with pytest.raises(PreconditionViolated) as err:
            pinv_sum_right(FIX_A, FIX_B)
        assert err.value.condition == "ranges_disjoint"

    def test_invertible_summand_gives_zero_corrections(self):
        zero = np.zeros((3, 3))
        left = pinv_sum_left(np.eye(3), zero)
        right = pinv_sum_right(zero, np.eye(3) * 0.0)  # both zero: trivial
        assert np.array_equal(left.matrix, np.zeros((3, 3)))
        assert left.range.dim == 0
        assert np.array_equal(right.matrix, np.zeros((3, 3)))

    def test_identifications_on_random_pairs(self):
        rng = np.random.default_rng(13)
        for _ in range(60):
            m = int(rng.integers(2, 9))
            n = int(rng.integers(2, 9))
            top = int(rng.integers(0, min(m, n) + 1))
            ra = int(rng.integers(0, top + 1))
            a, b = rank_additive_pair(rng, m, n, ra, top - ra)
            left = pinv_sum_left(a, b)
            right = pinv_sum_right(a, b)
            assert left.nullsp.equals(nullspace_of(b))
            assert right.range.equals(range_of(b))
            target = range_of(a).sum(
                range_of(a).complement().intersect(range_of(b).complement())
            )
            assert right.nullsp.equals(target)


class TestFormula:
    def test_orthogonal_direct_sum(self):
        assert np.allclose(pinv_sum(DA, DB), np.eye(2))

    def test_fixture_rejected_naming_condition(self):
        with pytest.raises(PreconditionViolated) as err:
            pinv_sum(FIX_A, FIX_B)
        assert err.value.condition == "ranges_disjoint"
        with pytest.raises(PreconditionViolated):
            pinv_sum(DA, DA)

    def test_rank_one_pair_in_r5_vs_svd_oracle(self):
        rng = np.random.default_rng(55)
        a, b = rank_additive_pair(rng, 5, 5, 1, 1)
        out = pinv_sum(a, b)
        direct = pinv(a + b)
        assert op_norm(out - direct) <= 1e-9 * max(1.0, op_norm(direct))

    def test_zero_edges(self):
        rng = np.random.default_rng(56)
        a = rng.standard_normal((4, 6))
        zero = np.zeros_like(a)
        assert op_norm(pinv_sum(a, zero) - pinv(a)) <= 1e-10 * max(1.0, op_norm(pinv(a)))
        assert op_norm(pinv_sum(zero, a) - pinv(a)) <= 1e-10 * max(1.0, op_norm(pinv(a)))

    def test_residuals_small_on_random_pairs(self):
        rng = np.random.default_rng(57)
        for _ in range(40):
            n = int(rng.integers(2, 10))
            top = int(rng.integers(0, n + 1))
            ra = int(rng.integers(0, top + 1))
            a, b = rank_additive_pair(rng, n, n, ra, top - ra)
            for name, value in pinv_sum_residuals(a, b).items():
                assert value <= 1e-9, (name, value)

    def test_residuals_accept_precomputed_value(self):
        rng = np.random.default_rng(58)
        a, b = rank_additive_pair(rng, 6, 6, 2, 1)
        x = pinv_sum(a, b)
        res = pinv_sum_residuals(a, b, value=x)
        assert max(res.values()) <= 1e-9

    def test_nonadditive_random_pairs_rejected(self):
        rng = np.random.default_rng(59)
        for _ in range(20):
            n = int(rng.integers(2, 9))
            a, b = overlapping_adjoint_pair(rng, n)
            with pytest.raises(PreconditionViolated):
                pinv_sum(a, b)


class TestBench:
    def test_basic_report(self):
        blocks = bench_update_vs_recompute([8], trials=10, seed=3)
        assert len(blocks) == 1
        block = blocks[0]
        assert block.dim == 8 and block.trials == 10
        assert len(block.ff_ns) == 10 and len(block.recompute_ns) == 10
        assert all(t > 0 for t in block.ff_ns)
        assert block.max_rel_error <= 1e-9

    def test_zero_trials(self):
        blocks = bench_update_vs_recompute([4, 8], trials=0, seed=3)
        assert [b.dim for b in blocks] == [4, 8]
        assert all(b.ff_ns == [] and b.recompute_ns == [] for b in blocks)
        assert all(b.max_rel_error == 0.0 for b in blocks)

    def test_empty_dims(self):
        assert bench_update_vs_recompute([], trials=5, seed=3) == []

    def test_block_serialization_key_order(self):
        block = BenchBlock(dim=4, trials=1, ff_ns=[10], recompute_ns=[20], max_rel_error=0.0)
        assert list(block.to_dict()) == ["dim", "trials", "ff_ns", "recompute_ns", "max_rel_error"]
        json.dumps(block.to_dict())  # serializable
