import numpy as np

from shortops.generators import (
    angles_separated,
    complementary_pair,
    mix_seed,
    mixed_pair,
    orthonormal_frame,
    overlapping_adjoint_pair,
    random_psd,
    rank_additive_pair,
    separated_psd_pair,
    well_conditioned,
)
from shortops.ranges import is_range_additive
from shortops.subspaces import principal_angles, range_of


def test_orthonormal_frame_shape_and_orthonormality():
    rng = np.random.default_rng(0)
    q = orthonormal_frame(rng, 7, 3)
    assert q.shape == (7, 3)
    assert np.allclose(q.T @ q, np.eye(3), atol=1e-13)
    assert orthonormal_frame(rng, 5, 0).shape == (5, 0)


def test_well_conditioned_bounds():
    rng = np.random.default_rng(1)
    for _ in range(20):
        k = int(rng.integers(1, 8))
        m = well_conditioned(rng, k)
        s = np.linalg.svd(m, compute_uv=False)
        assert s[0] / s[-1] <= 4.0 + 1e-9


def test_random_psd_rank_and_spectrum():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(1, 10))
        rank = int(rng.integers(0, n + 1))
        a = random_psd(rng, n, rank)
        assert a.rank() == rank
        nonzero = a.spectrum[:rank]
        assert np.all(nonzero >= 0.1 - 1e-12) and np.all(nonzero <= 2.0 + 1e-12)


def test_rank_additive_pair_is_rank_additive():
    rng = np.random.default_rng(3)
    for _ in range(40):
        m = int(rng.integers(2, 10))
        n = int(rng.integers(2, 10))
        top = int(rng.integers(0, min(m, n) + 1))
        ra = int(rng.integers(0, top + 1))
        a, b = rank_additive_pair(rng, m, n, ra, top - ra)
        assert range_of(a).dim == ra
        assert range_of(b).dim == top - ra
        assert range_of(a + b).dim == top
        assert range_of(a).intersect(range_of(b)).dim == 0
        assert range_of(a.T).intersect(range_of(b.T)).dim == 0


def test_overlapping_adjoint_pair_is_nonadditive():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(2, 10))
        a, b = overlapping_adjoint_pair(rng, n)
        assert range_of(a).intersect(range_of(b)).dim == 0
        assert range_of(a.T).intersect(range_of(b.T)).dim >= 1
        assert not is_range_additive(a, b)


def test_mixed_pair_kinds():
    rng = np.random.default_rng(5)
    kinds = {mixed_pair(rng, 6)[2] for _ in range(200)}
    assert {"nonadditive", "rank_additive", "generic", "lowrank"} <= kinds


def test_complementary_pair_properties():
    rng = np.random.default_rng(6)
    for _ in range(30):
        n = int(rng.integers(2, 10))
        first, second = complementary_pair(rng, n)
        assert first.dim + second.dim == n
        assert first.sum(second).dim == n
        angles = principal_angles(first, second)
        assert angles.size == 0 or angles[0] >= 1e-3


def test_separated_psd_pair_avoids_the_band():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        a, b = separated_psd_pair(rng, n, min_angle=1e-2)
        assert angles_separated(range_of(a.matrix), range_of(b.matrix), 1e-2)


def test_mix_seed_spread():
    seen = {mix_seed(5, i) for i in range(1000)}
    assert len(seen) == 1000
