"""Shorted operators and parallel sums.

The shorted operator of a PSD matrix ``A`` to a subspace ``S`` is the
largest PSD matrix below ``A`` (semidefinite order) whose range lies in
``S``. Two independent algorithms are shipped and cross-asserted in the
test suite:

* ``shorted_sqrt``: conjugate the projector onto ``A^{-1/2}(S)`` by the PSD
  square root of ``A``.
* ``shorted_schur``: rotate to a basis adapted to ``S`` and take the
  generalized Schur complement of the off-``S`` block.

The parallel sum ``A : B = A (A+B)^+ B`` (impedance of parallel-connected
networks) is tied back to shorting through a 2n x 2n block identity and the
scaled-projector limit ``A : n P_S -> [S]A``.
"""

from __future__ import annotations

import numpy as np

from .core import PsdMatrix, as_matrix, as_psd, pinv, sqrt_psd
from .errors import BlockNotPsd, NotPsd, ShapeMismatchError
from .subspaces import Subspace, preimage
from .tolerance import DEFAULT_TOL, ToleranceContext

__all__ = [
    "shorted_sqrt",
    "shorted_schur",
    "shorted",
    "parallel_sum",
    "parallel_sum_reduced",
    "shorted_parallel_approx",
    "parallel_sum_block",
]


def _check_pair(a: PsdMatrix, s: Subspace):
    if a.dim != s.ambient_dim:
        raise ShapeMismatchError(
            f"matrix dimension {a.dim} does not match ambient {s.ambient_dim}"
        )


def shorted_sqrt(a, s: Subspace, tol: ToleranceContext = DEFAULT_TOL) -> PsdMatrix:
    """Shorted operator via the square-root/preimage factorization."""
    a = as_psd(a, tol)
    _check_pair(a, s)
    root = sqrt_psd(a, tol)
    pulled = preimage(root.matrix, s, tol)
    out = root.matrix @ pulled.projector() @ root.matrix
    return as_psd(out, tol, scale=a.norm, trusted=True)


def shorted_schur(a, s: Subspace, tol: ToleranceContext = DEFAULT_TOL) -> PsdMatrix:
    """Shorted operator via a generalized Schur complement.

    Rotates to an orthonormal basis adapted to ``S (+) S^perp``, forms
    ``A11 - A12 A22^+ A21`` in that basis, and rotates back. Valid for every
    PSD matrix because the off-diagonal block ranges are automatically
    contained in the diagonal ones.
    """
    a = as_psd(a, tol)
    _check_pair(a, s)
    n, k = a.dim, s.dim
    rot = np.hstack([s.basis, s.complement().basis])
    adapted = rot.T @ a.matrix @ rot
    a11 = adapted[:k, :k]
    a12 = adapted[:k, k:]
    a21 = adapted[k:, :k]
    a22 = adapted[k:, k:]
    out = np.zeros((n, n))
    if k:
        # a22 itself may be cancellation noise (S^perp inside N(A)); floor
        # its rank reference by the norm of A
        out[:k, :k] = a11 - a12 @ pinv(a22, tol, scale=a.norm) @ a21
    return as_psd(rot @ out @ rot.T, tol, scale=a.norm, trusted=True)


def shorted(
    a, s: Subspace, tol: ToleranceContext = DEFAULT_TOL, method: str = "sqrt"
) -> PsdMatrix:
    """Dispatch between the two shorting algorithms."""
    if method == "sqrt":
        return shorted_sqrt(a, s, tol)
    if method == "schur":
        return shorted_schur(a, s, tol)
    raise ValueError(f"unknown method {method!r}; expected 'sqrt' or 'schur'")


def parallel_sum(a, b, tol: ToleranceContext = DEFAULT_TOL) -> PsdMatrix:
    """Parallel sum ``A (A+B)^+ B`` of two PSD matrices.

    The product is symmetric in exact arithmetic; averaging with the
    transpose removes the roundoff-level asymmetry before construction.
    """
    a = as_psd(a, tol)
    b = as_psd(b, tol)
    if a.dim != b.dim:
        raise ShapeMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    x = a.matrix @ pinv(a.matrix + b.matrix, tol) @ b.matrix
    return as_psd(0.5 * (x + x.T), tol, scale=max(a.norm, b.norm), trusted=True)


def parallel_sum_reduced(a, b, tol: ToleranceContext = DEFAULT_TOL) -> PsdMatrix:
    """Independent route to the parallel sum through reduced solutions.

    With ``T = (A+B)^{1/2}`` and ``C``, ``D`` the reduced solutions of
    ``T X = A^{1/2}`` and ``T X = B^{1/2}``, the parallel sum equals
    ``A^{1/2} C^T D B^{1/2}``. Used as a cross-check oracle for
    :func:`parallel_sum`.
    """
    from .ranges import reduced_solution

    a = as_psd(a, tol)
    b = as_psd(b, tol)
    if a.dim != b.dim:
        raise ShapeMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    scale = max(a.norm, b.norm)
    total_root = sqrt_psd(as_psd(a.matrix + b.matrix, tol, scale=scale), tol)
    root_a = sqrt_psd(a, tol)
    root_b = sqrt_psd(b, tol)
    c, _ = reduced_solution(total_root.matrix, root_a.matrix, tol)
    d, _ = reduced_solution(total_root.matrix, root_b.matrix, tol)
    x = root_a.matrix @ c.T @ d @ root_b.matrix
    return as_psd(0.5 * (x + x.T), tol, scale=scale, trusted=True)


def shorted_parallel_approx(
    a, s: Subspace, n: int, tol: ToleranceContext = DEFAULT_TOL
) -> PsdMatrix:
    """One step of the scaled-projector approximation ``A : (n P_S)``.

    As ``n`` grows this converges monotonically (in operator norm) to the
    shorted operator; ``n`` is exposed so convergence can be measured.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    a = as_psd(a, tol)
    _check_pair(a, s)
    weight = float(n) * s.projector()
    x = a.matrix @ pinv(a.matrix + weight, tol) @ weight
    # the result is squeezed below A, so noise cleanup scales with |A|;
    # tying it to the weight would grow with n and eat genuine content
    return as_psd(0.5 * (x + x.T), tol, scale=a.norm, trusted=True)


def parallel_sum_block(a, b, tol: ToleranceContext = DEFAULT_TOL) -> PsdMatrix:
    """Parallel sum as the leading block of a shorted 2n x 2n matrix.

    Assembles ``[[A, A], [A, A+B]]``, shorts it to the first-coordinate
    subspace, and extracts the leading n x n block. Independent consistency
    route for :func:`parallel_sum`.
    """
    am = a.matrix if isinstance(a, PsdMatrix) else as_matrix(a, "a")
    bm = b.matrix if isinstance(b, PsdMatrix) else as_matrix(b, "b")
    if am.shape != bm.shape or am.shape[0] != am.shape[1]:
        raise ShapeMismatchError(f"need equal square shapes, got {am.shape} and {bm.shape}")
    n = am.shape[0]
    block = np.block([[am, am], [am, am + bm]])
    try:
        block_psd = PsdMatrix.from_matrix(block, tol)
    except NotPsd as exc:
        raise BlockNotPsd("assembled block matrix is not PSD", str(exc)) from exc
    first = Subspace(2 * n, np.eye(2 * n)[:, :n])
    shorted_block = shorted_sqrt(block_psd, first, tol)
    lead = shorted_block.matrix[:n, :n]
    return as_psd(lead, tol, scale=block_psd.norm, trusted=True)
