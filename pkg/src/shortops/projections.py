"""Oblique projections and the projection/pseudoinverse correspondence.

Covers: building the idempotent with prescribed range and kernel, the
pseudoinverse of a projection as a product of two orthogonal projectors
(and its converse for products of projectors), the projection that is
selfadjoint for the semi-inner product of a PSD weight, and the idempotent
solution of ``(A + B) X = A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PsdMatrix, as_matrix, pinv, spectral_norm
from .errors import NotCompatible, NotComplementary, PreconditionViolated, ShapeMismatchError
from .subspaces import Subspace, nullspace_of, range_of
from .tolerance import DEFAULT_TOL, ToleranceContext

__all__ = [
    "ObliqueProjection",
    "oblique",
    "pinv_of_projection",
    "pinv_of_projector_product",
    "compatible_projection",
    "projection_solution",
]


@dataclass(frozen=True, eq=False)
class ObliqueProjection:
    """An idempotent matrix together with its range and kernel."""

    matrix: np.ndarray
    range: Subspace
    nullsp: Subspace

    def __post_init__(self):
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n):
            raise ShapeMismatchError(f"projection must be square, got {self.matrix.shape}")
        if self.range.ambient_dim != n or self.nullsp.ambient_dim != n:
            raise ShapeMismatchError("subspace ambient dimensions do not match the matrix")
        if self.range.dim + self.nullsp.dim != n:
            raise ShapeMismatchError("range and nullspace dimensions do not add up")
        norm = spectral_norm(self.matrix)
        resid = spectral_norm(self.matrix @ self.matrix - self.matrix)
        # oblique projections can be large when the subspace angle is small;
        # the idempotency budget scales with |Q|^2
        if resid > 1e-10 * max(1.0, norm * norm):
            raise ValueError(f"matrix is not idempotent (residual {resid:.3e})")

    @classmethod
    def from_matrix(cls, q, tol: ToleranceContext = DEFAULT_TOL) -> "ObliqueProjection":
        q = as_matrix(q, "projection")
        return cls(matrix=q, range=range_of(q, tol), nullsp=nullspace_of(q, tol))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def complement_projection(self) -> "ObliqueProjection":
        """``I - Q``, the projection onto the kernel along the range."""
        eye = np.eye(self.dim)
        return ObliqueProjection(eye - self.matrix, self.nullsp, self.range)


def oblique(
    m: Subspace, n: Subspace, tol: ToleranceContext = DEFAULT_TOL
) -> ObliqueProjection:
    """Projection with range ``m`` and kernel ``n`` for complementary pairs.

    Solves against the concatenated basis: the projection fixes every basis
    vector of ``m`` and kills every basis vector of ``n``.
    """
    if m.ambient_dim != n.ambient_dim:
        raise ShapeMismatchError("ambient dimensions differ")
    dim = m.ambient_dim
    if m.dim + n.dim != dim:
        raise NotComplementary(
            "subspaces are not complementary",
            f"dims {m.dim} + {n.dim} != {dim}",
        )
    stacked = np.hstack([m.basis, n.basis])
    sigma = np.linalg.svd(stacked, compute_uv=False)
    if sigma.size and sigma[-1] <= tol.rank_cutoff(stacked.shape) * sigma[0]:
        raise NotComplementary(
            "subspaces are not complementary", "nontrivial intersection"
        )
    fixed = np.hstack([m.basis, np.zeros((dim, n.dim))])
    q = np.linalg.solve(stacked.T, fixed.T).T
    return ObliqueProjection(matrix=q, range=m, nullsp=n)


def pinv_of_projection(q: ObliqueProjection, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Pseudoinverse of a projection without any decomposition.

    For an idempotent ``Q`` the pseudoinverse is the product of the
    orthogonal projectors onto ``N(Q)^perp`` and onto ``R(Q)``, in that
    order.
    """
    return q.nullsp.complement().projector() @ q.range.projector()


def pinv_of_projector_product(
    m: Subspace, n: Subspace, tol: ToleranceContext = DEFAULT_TOL
) -> ObliqueProjection:
    """Pseudoinverse of ``P_M P_N``, packaged as the projection it is.

    The result is the unique idempotent with range ``R(P_N P_M)`` and
    kernel ``N(P_N P_M)``.
    """
    if m.ambient_dim != n.ambient_dim:
        raise ShapeMismatchError("ambient dimensions differ")
    product = m.projector() @ n.projector()
    inverse = pinv(product, tol)
    reverse = n.projector() @ m.projector()
    return ObliqueProjection(
        matrix=inverse, range=range_of(reverse, tol), nullsp=nullspace_of(reverse, tol)
    )


def compatible_projection(
    a: PsdMatrix, s: Subspace, tol: ToleranceContext = DEFAULT_TOL
) -> ObliqueProjection:
    """The canonical projection onto ``s`` that is selfadjoint for the
    semi-inner product ``<x, y>_A = <Ax, y>``.

    The kernel is fixed deterministically as the orthogonal complement of
    ``s & N(A)`` taken inside ``(A s)^perp``; with that choice the output is
    unique even when ``A`` vanishes on part of ``s``.
    """
    if a.dim != s.ambient_dim:
        raise ShapeMismatchError("weight dimension does not match subspace")
    image = range_of(a.matrix @ s.projector(), tol, scale=a.norm)  # A(s)
    witness = image.complement()  # (A s)^perp
    if s.sum(witness, tol).dim != a.dim:
        raise NotCompatible(
            "pair is not compatible", "s + (A s)^perp does not cover the space"
        )
    degenerate = s.intersect(nullspace_of(a.matrix, tol), tol)  # s & N(A)
    kernel = witness.intersect(degenerate.complement(), tol)
    return oblique(s, kernel, tol)


def projection_solution(
    a, b, tol: ToleranceContext = DEFAULT_TOL
) -> ObliqueProjection:
    """An idempotent ``Q`` with ``(A + B) Q = A``.

    Exists whenever the row spaces of ``A`` and ``B`` intersect trivially.
    The transpose of ``Q`` fixes the row space of ``A`` (extended by the
    identity on the orthogonal leftover ``W``) and kills the row space of
    ``B``, which pins the solution down uniquely.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    rows_a = range_of(a.T, tol)
    rows_b = range_of(b.T, tol)
    if rows_a.intersect(rows_b, tol).dim != 0:
        raise PreconditionViolated(
            "adjoint_ranges_disjoint", "row spaces intersect nontrivially"
        )
    leftover = rows_a.sum(rows_b, tol).complement()
    qt = oblique(rows_a.sum(leftover, tol), rows_b, tol)
    return ObliqueProjection.from_matrix(qt.matrix.T, tol)
