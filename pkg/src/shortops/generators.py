"""Seeded random builders for matrices, subspaces, and structured pairs.

The theorems under test put measure-zero-avoiding constraints on their
inputs (prescribed range intersections, rank splits), which rejection
sampling hits unreliably at higher rank. The builders here construct the
constrained objects directly from orthonormal frames mixed by
well-conditioned cores, so every generated instance satisfies its
hypotheses by construction and stays numerically tame: mixing cores have
condition number <= 4 and nonzero spectra live in [0.1, 2].

All functions take an explicit ``numpy.random.Generator``; per-trial
generators come from :func:`mix_seed` so any failing trial replays in
isolation.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .core import PsdMatrix, as_psd
from .subspaces import Subspace, principal_angles

__all__ = [
    "mix_seed",
    "rng_for_trial",
    "digest_inputs",
    "orthonormal_frame",
    "random_subspace",
    "random_psd",
    "well_conditioned",
    "rank_additive_pair",
    "overlapping_adjoint_pair",
    "mixed_pair",
    "angles_separated",
    "separated_psd_pair",
    "separated_subspace",
    "complementary_pair",
]

_MASK = (1 << 64) - 1


def mix_seed(root: int, index: int) -> int:
    """Derive a 64-bit per-trial seed from a root seed and trial index.

    splitmix64 finalizer; stable across platforms and processes.
    """
    z = (root + 0x9E3779B97F4A7C15 * (index + 1)) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def rng_for_trial(root: int, index: int) -> np.random.Generator:
    return np.random.default_rng(mix_seed(root, index))


def digest_inputs(*arrays) -> str:
    """Short stable digest of the input matrices of a trial."""
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(np.asarray(a, dtype=np.float64))
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


def orthonormal_frame(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """n x k matrix with orthonormal columns, Haar-ish distributed."""
    if k == 0:
        return np.zeros((n, 0))
    g = rng.standard_normal((n, k))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def random_subspace(rng: np.random.Generator, n: int, k: int | None = None) -> Subspace:
    if k is None:
        k = int(rng.integers(0, n + 1))
    return Subspace(ambient_dim=n, basis=orthonormal_frame(rng, n, k))


def well_conditioned(rng: np.random.Generator, k: int, sigma=(0.5, 2.0)) -> np.ndarray:
    """Random k x k matrix with singular values in ``sigma`` (cond <= 4)."""
    if k == 0:
        return np.zeros((0, 0))
    lo, hi = sigma
    s = np.exp(rng.uniform(np.log(lo), np.log(hi), size=k))
    return (orthonormal_frame(rng, k, k) * s) @ orthonormal_frame(rng, k, k).T


def random_psd(
    rng: np.random.Generator,
    n: int,
    rank: int | None = None,
    spread=(0.1, 2.0),
) -> PsdMatrix:
    """Random PSD matrix with prescribed rank and bounded nonzero spectrum."""
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    v = orthonormal_frame(rng, n, n)
    w = np.zeros(n)
    w[:rank] = np.sort(rng.uniform(*spread, size=rank))[::-1]
    m = (v * w) @ v.T
    return as_psd(0.5 * (m + m.T))


def rank_additive_pair(
    rng: np.random.Generator, m: int, n: int, ra: int, rb: int
) -> tuple[np.ndarray, np.ndarray]:
    """Pair with rank(A+B) = rank(A) + rank(B).

    Ranges and row spaces are carved out of shared frames mixed by
    well-conditioned cores, so the four subspaces intersect trivially with
    angles bounded away from zero. Requires ``ra + rb <= min(m, n)``.
    """
    if ra + rb > min(m, n):
        raise ValueError(f"rank split ({ra}, {rb}) exceeds min dimension {min(m, n)}")
    col = orthonormal_frame(rng, m, ra + rb) @ well_conditioned(rng, ra + rb)
    row = orthonormal_frame(rng, n, ra + rb) @ well_conditioned(rng, ra + rb)
    a = col[:, :ra] @ row[:, :ra].T
    b = col[:, ra:] @ row[:, ra:].T
    if ra == 0:
        a = np.zeros((m, n))
    if rb == 0:
        b = np.zeros((m, n))
    return a, b


def overlapping_adjoint_pair(
    rng: np.random.Generator,
    n: int,
    ra: int | None = None,
    rb: int | None = None,
    overlap: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Non-additive pair: ranges disjoint, row spaces sharing ``overlap`` dims.

    With trivially intersecting ranges, additivity is equivalent to the
    nullspaces covering the space, i.e. to the row spaces being disjoint;
    forcing an overlap therefore forces ``R(A+B) != R(A) + R(B)``.
    """
    if ra is None:
        ra = int(rng.integers(1, max(2, n // 2 + 1)))
    if rb is None:
        rb = int(rng.integers(1, max(2, n - ra + 1)))
    overlap = min(overlap, ra, rb)
    if overlap < 1 or ra + rb > n:
        raise ValueError(f"need 1 <= overlap <= min(ra, rb) and ra + rb <= n, got {(ra, rb, overlap, n)}")
    col = orthonormal_frame(rng, n, ra + rb) @ well_conditioned(rng, ra + rb)
    rows = orthonormal_frame(rng, n, ra + rb - overlap) @ well_conditioned(
        rng, ra + rb - overlap
    )
    row_a = rows[:, :ra]
    row_b = np.hstack([rows[:, :overlap], rows[:, ra:]])
    a = col[:, :ra] @ row_a.T
    b = col[:, ra:] @ row_b.T
    return a, b


def mixed_pair(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray, str]:
    """Pair sampler mixing additive, non-additive, and unconstrained cases.

    At least ~40% of draws come from the forced non-additive construction;
    the rest are rank-additive pairs, full-rank perturbations, and
    unconstrained low-rank pairs.
    """
    kind = rng.choice(["nonadditive", "rank_additive", "generic", "lowrank"], p=[0.4, 0.2, 0.2, 0.2])
    if kind == "nonadditive" and n >= 2:
        ra = int(rng.integers(1, n))
        rb = int(rng.integers(1, n - ra + 1))
        overlap = int(rng.integers(1, min(ra, rb) + 1))
        a, b = overlapping_adjoint_pair(rng, n, ra, rb, overlap)
    elif kind == "rank_additive":
        ra = int(rng.integers(0, n + 1))
        rb = int(rng.integers(0, n - ra + 1))
        a, b = rank_additive_pair(rng, n, n, ra, rb)
    elif kind == "generic" or n < 2:
        kind = "generic"
        a = rng.standard_normal((n, n))
        b = rng.standard_normal((n, n))
    else:
        ra = int(rng.integers(1, n + 1))
        rb = int(rng.integers(1, n + 1))
        a = orthonormal_frame(rng, n, ra) @ rng.standard_normal((ra, n))
        b = orthonormal_frame(rng, n, rb) @ rng.standard_normal((rb, n))
    return a, b, kind


def angles_separated(
    s: Subspace, t: Subspace, min_angle: float = 1e-3, zero_band: float = 1e-7
) -> bool:
    """True when no principal angle falls in the ill-conditioned band.

    Angles below ``zero_band`` are genuine intersections (exact zeros plus
    computation noise); angles above ``min_angle`` are honest separations.
    Anything in between makes rank decisions scale-dependent and is
    rejected by the structured samplers below.
    """
    angles = principal_angles(s, t)
    return not np.any((angles > zero_band) & (angles < min_angle))


def separated_psd_pair(
    rng: np.random.Generator,
    n: int,
    min_angle: float = 1e-3,
    ranks: tuple[int | None, int | None] = (None, None),
    spread=(0.1, 2.0),
) -> tuple[PsdMatrix, PsdMatrix]:
    """Random PSD pair whose ranges meet at well-separated angles."""
    from .subspaces import range_of

    while True:
        a = random_psd(rng, n, ranks[0], spread)
        b = random_psd(rng, n, ranks[1], spread)
        if angles_separated(range_of(a.matrix), range_of(b.matrix), min_angle):
            return a, b


def separated_subspace(
    rng: np.random.Generator,
    n: int,
    anchors,
    k: int | None = None,
    min_angle: float = 1e-3,
) -> Subspace:
    """Random subspace with well-separated angles against every anchor."""
    while True:
        s = random_subspace(rng, n, k)
        if all(angles_separated(s, anchor, min_angle) for anchor in anchors):
            return s


def complementary_pair(
    rng: np.random.Generator,
    n: int,
    k: int | None = None,
    min_angle: float = 1e-3,
) -> tuple[Subspace, Subspace]:
    """Complementary subspace pair with all principal angles >= min_angle.

    The angle floor keeps the norm of the associated oblique projection
    bounded by roughly 1/min_angle.
    """
    if k is None:
        k = int(rng.integers(1, n)) if n > 1 else 1
    first = random_subspace(rng, n, k)
    while True:
        second = random_subspace(rng, n, n - k)
        if first.sum(second).dim != n:
            continue
        angles = principal_angles(first, second)
        if angles.size == 0 or angles[0] >= min_angle:
            return first, second
