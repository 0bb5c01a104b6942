import numpy as np
import pytest

from shortops.core import loewner_leq
from shortops.errors import BlockNotPsd, ShapeMismatchError
from shortops.generators import random_psd, separated_psd_pair, separated_subspace
from shortops.shorted import (
    parallel_sum,
    parallel_sum_block,
    parallel_sum_reduced,
    shorted,
    shorted_parallel_approx,
    shorted_schur,
    shorted_sqrt,
)
from shortops.subspaces import Subspace, is_direct_sum, nullspace_of, range_of

from helpers import op_norm


E1 = Subspace.span([1.0, 0.0])
DIAG11 = Subspace.span([1.0, 1.0])
A21 = np.array([[2.0, 1.0], [1.0, 1.0]])


def schur_oracle():
    # direct evaluation of the 2x2 generalized Schur complement for the
    # coordinate subspace: a11 - a12 a22^{-1} a21 = 2 - 1*1*1 = 1
    return np.array([[2.0 - 1.0 * (1.0 / 1.0) * 1.0, 0.0], [0.0, 0.0]])


class TestShortedValues:
    def test_two_by_two_against_schur_oracle(self):
        expected = schur_oracle()
        assert np.allclose(shorted_sqrt(A21, E1).matrix, expected, atol=1e-12)
        assert np.allclose(shorted_schur(A21, E1).matrix, expected, atol=1e-12)

    def test_identity_weight(self):
        assert np.allclose(shorted_sqrt(np.eye(2), DIAG11).matrix, DIAG11.projector())

    def test_whole_space(self):
        out = shorted_sqrt(A21, Subspace.full(2))
        assert np.allclose(out.matrix, A21, atol=1e-12)

    def test_block_diagonal_case(self):
        out = shorted_schur(np.diag([3.0, 5.0]), E1)
        assert np.allclose(out.matrix, np.diag([3.0, 0.0]))

    def test_rank_one_projector_shorts_to_zero(self):
        # a11 - a12 a22^{-1} a21 = 1/2 - (1/2)(2)(1/2) = 0
        proj = 0.5 * np.ones((2, 2))
        assert np.allclose(shorted_schur(proj, E1).matrix, 0.0, atol=1e-12)
        assert np.allclose(shorted_sqrt(proj, E1).matrix, 0.0, atol=1e-12)

    def test_dispatch(self):
        assert np.allclose(shorted(A21, E1, method="schur").matrix, schur_oracle(), atol=1e-12)
        with pytest.raises(ValueError):
            shorted(A21, E1, method="cholesky")

    def test_dim_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            shorted_sqrt(A21, Subspace.full(3))


class TestShortedProperties:
    def test_cross_oracle_and_laws(self):
        rng = np.random.default_rng(17)
        for _ in range(150):
            n = int(rng.integers(2, 13))
            a = random_psd(rng, n)
            s = separated_subspace(rng, n, (range_of(a.matrix),))
            cut = shorted_sqrt(a, s)
            other = shorted_schur(a, s)
            budget = 1e-10 * a.norm if a.norm else 0.0
            assert op_norm(cut.matrix - other.matrix) <= budget
            assert loewner_leq(cut.matrix, a.matrix)
            assert s.contains(range_of(cut.matrix))
            assert range_of(cut.matrix).equals(range_of(a.matrix).intersect(s))
            assert nullspace_of(cut.matrix).equals(
                nullspace_of(a.matrix).sum(s.complement())
            )
            # residual part avoids the subspace and splits the range
            resid = range_of(a.matrix - cut.matrix, scale=a.norm)
            assert resid.intersect(s).dim == 0
            assert is_direct_sum(resid, range_of(cut.matrix))
            assert resid.sum(range_of(cut.matrix)).equals(range_of(a.matrix))

    def test_superadditive(self):
        rng = np.random.default_rng(18)
        for _ in range(80):
            n = int(rng.integers(2, 11))
            a, b = separated_psd_pair(rng, n, min_angle=3e-2)
            s = separated_subspace(rng, n, (range_of(a.matrix), range_of(b.matrix)))
            lhs = shorted_sqrt(a, s).matrix + shorted_sqrt(b, s).matrix
            rhs = shorted_sqrt(a.matrix + b.matrix, s).matrix
            assert loewner_leq(lhs, rhs)

    def test_absorbs_summand_when_shorting_to_its_range(self):
        rng = np.random.default_rng(19)
        for _ in range(80):
            n = int(rng.integers(2, 11))
            a, b = separated_psd_pair(rng, n, min_angle=3e-2)
            s = range_of(b.matrix)
            combined = shorted_sqrt(a.matrix + b.matrix, s)
            expected = shorted_sqrt(a, s).matrix + b.matrix
            assert op_norm(combined.matrix - expected) <= 1e-10 * max(1.0, a.norm + b.norm)
            assert range_of(combined.matrix).equals(s)
            assert nullspace_of(combined.matrix).equals(s.complement())


class TestParallelSum:
    def test_identity_pair(self):
        out = parallel_sum(np.eye(2), np.eye(2))
        assert np.allclose(out.matrix, 0.5 * np.eye(2))

    def test_disjoint_ranges_vanish(self):
        out = parallel_sum(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert np.array_equal(out.matrix, np.zeros((2, 2)))

    def test_entrywise_oracle(self):
        # A(A+B)^+ B with the explicit inverse of diag(2, 1)
        a, b = np.diag([1.0, 1.0]), np.diag([1.0, 0.0])
        expected = a @ np.diag([0.5, 1.0]) @ b
        out = parallel_sum(a, b)
        assert np.allclose(out.matrix, expected)
        assert np.allclose(out.matrix, np.diag([0.5, 0.0]))

    def test_properties_and_reduced_route(self):
        rng = np.random.default_rng(20)
        for _ in range(100):
            n = int(rng.integers(2, 11))
            a, b = separated_psd_pair(rng, n, min_angle=3e-2)
            out = parallel_sum(a, b)
            scale = max(1.0, a.norm, b.norm)
            assert op_norm(out.matrix - parallel_sum(b, a).matrix) <= 1e-10 * scale
            assert op_norm(out.matrix - parallel_sum_reduced(a, b).matrix) <= 1e-10 * scale
            assert range_of(out.matrix).equals(
                range_of(a.matrix).intersect(range_of(b.matrix))
            )
            assert loewner_leq(out.matrix, a.matrix)
            assert loewner_leq(out.matrix, b.matrix)


class TestScaledProjectorApproximation:
    def test_projector_input_scalarizes(self):
        p = DIAG11.projector()
        for n in (1, 3, 10):
            out = shorted_parallel_approx(p, DIAG11, n)
            assert np.allclose(out.matrix, (n / (n + 1.0)) * p, atol=1e-12)

    def test_identity_whole_space(self):
        for n in (1, 5):
            out = shorted_parallel_approx(np.eye(3), Subspace.full(3), n)
            assert np.allclose(out.matrix, (n / (n + 1.0)) * np.eye(3), atol=1e-12)

    def test_large_weight_close_to_shorted(self):
        out = shorted_parallel_approx(A21, E1, 10**6)
        assert op_norm(out.matrix - np.diag([1.0, 0.0])) <= 1e-5

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            shorted_parallel_approx(A21, E1, 0)

    def test_monotone_in_weight(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            n = int(rng.integers(2, 9))
            a = random_psd(rng, n)
            s = separated_subspace(rng, n, (range_of(a.matrix),))
            cut = shorted_sqrt(a, s)
            floor = 1e-6 * max(1.0, a.norm)
            prev = None
            for weight in (1, 10, 100, 1000, 10**4):
                d = op_norm(shorted_parallel_approx(a, s, weight).matrix - cut.matrix)
                if prev is not None:
                    assert d <= prev + 1e-12 or d <= floor
                prev = d


class TestBlockIdentity:
    def test_identity_pair(self):
        out = parallel_sum_block(np.eye(2), np.eye(2))
        assert np.allclose(out.matrix, 0.5 * np.eye(2))

    def test_disjoint_pair(self):
        out = parallel_sum_block(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert np.allclose(out.matrix, np.zeros((2, 2)), atol=1e-12)

    def test_against_parallel_sum_oracle(self):
        rng = np.random.default_rng(29)
        for _ in range(40):
            a = random_psd(rng, 4)
            b = random_psd(rng, 4)
            lhs = parallel_sum_block(a, b)
            rhs = parallel_sum(a, b)
            assert op_norm(lhs.matrix - rhs.matrix) <= 1e-9 * max(1.0, a.norm, b.norm)

    def test_rejects_non_psd_inputs(self):
        with pytest.raises(BlockNotPsd):
            parallel_sum_block(np.diag([1.0, -1.0]), np.eye(2))
