"""Subspaces of R^n as orthonormal bases, with lattice operations.

A :class:`Subspace` is an ambient dimension plus an n x k matrix with
orthonormal columns (k = 0 is a first-class value, so predicates like
"the ranges intersect trivially" are ordinary equality checks against
``Subspace.zero(n)``).

Equality and containment are decided through principal angles, never by
comparing bases. Small angles are computed through sines (residual SVD)
because cosines lose half the digits near zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_matrix, spectral_norm, svd_rank
from .errors import ShapeMismatchError
from .tolerance import DEFAULT_TOL, ToleranceContext

__all__ = [
    "Subspace",
    "range_of",
    "nullspace_of",
    "preimage",
    "principal_angles",
    "is_direct_sum",
]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of R^n, held as an orthonormal basis."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        n, k = self.basis.shape
        if n != self.ambient_dim or self.ambient_dim < 1:
            raise ShapeMismatchError(
                f"basis shape {self.basis.shape} inconsistent with ambient "
                f"dimension {self.ambient_dim}"
            )
        if k > n:
            raise ShapeMismatchError(f"{k} basis vectors in dimension {n}")
        gram = self.basis.T @ self.basis
        if k and not np.allclose(gram, np.eye(k), atol=1e-12):
            raise ValueError("basis columns are not orthonormal")

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_spanning(cls, columns, tol: ToleranceContext = DEFAULT_TOL) -> "Subspace":
        """Span of the columns of an arbitrary matrix (orthonormalized)."""
        m = as_matrix(columns, "spanning set")
        rank, _, left, _ = svd_rank(m, tol)
        return cls(ambient_dim=m.shape[0], basis=left[:, :rank])

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(ambient_dim=n, basis=np.zeros((n, 0)))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(ambient_dim=n, basis=np.eye(n))

    @classmethod
    def span(cls, *vectors, tol: ToleranceContext = DEFAULT_TOL) -> "Subspace":
        """Convenience: subspace spanned by the given vectors."""
        return cls.from_spanning(np.column_stack([np.asarray(v, float) for v in vectors]), tol)

    # -- basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projection onto the subspace.

        The full subspace maps to the exact identity so that expressions
        like ``I - P`` cancel to exact zeros instead of roundoff noise.
        """
        if self.dim == self.ambient_dim:
            return np.eye(self.ambient_dim)
        return self.basis @ self.basis.T

    # -- lattice operations ------------------------------------------------

    def _check_ambient(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise ShapeMismatchError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def sum(self, other: "Subspace", tol: ToleranceContext = DEFAULT_TOL) -> "Subspace":
        self._check_ambient(other)
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        return Subspace.from_spanning(np.hstack([self.basis, other.basis]), tol)

    def complement(self) -> "Subspace":
        """Orthogonal complement."""
        n, k = self.basis.shape
        if k == 0:
            return Subspace.full(n)
        _, _, vh = np.linalg.svd(self.basis.T, full_matrices=True)
        return Subspace(ambient_dim=n, basis=vh[k:, :].T)

    def intersect(self, other: "Subspace", tol: ToleranceContext = DEFAULT_TOL) -> "Subspace":
        # one code path: de Morgan through sum and complement
        self._check_ambient(other)
        return self.complement().sum(other.complement(), tol).complement()

    # -- comparisons -------------------------------------------------------

    def equals(self, other: "Subspace", tol: ToleranceContext = DEFAULT_TOL) -> bool:
        self._check_ambient(other)
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        angles = principal_angles(self, other)
        return bool(angles[-1] <= tol.angle_tol)

    def contains(self, other: "Subspace", tol: ToleranceContext = DEFAULT_TOL) -> bool:
        """True iff ``other`` is a subspace of ``self`` (within angle_tol)."""
        self._check_ambient(other)
        if other.dim == 0:
            return True
        if other.dim > self.dim:
            return False
        angles = principal_angles(self, other)
        return bool(angles[-1] <= tol.angle_tol)

    def __repr__(self):  # short, basis elided
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def principal_angles(s: Subspace, t: Subspace) -> np.ndarray:
    """Principal angles between two subspaces, nondecreasing, in [0, pi/2].

    Returns ``min(dim s, dim t)`` angles. Cosines come from the SVD of
    ``Qs^T Qt``; angles below pi/4 are recomputed from the sines of the
    projected residual, which stays accurate down to machine precision.
    """
    if s.ambient_dim != t.ambient_dim:
        raise ShapeMismatchError("ambient dimensions differ")
    k = min(s.dim, t.dim)
    if k == 0:
        return np.zeros(0)
    cos = np.linalg.svd(s.basis.T @ t.basis, compute_uv=False)
    cos = np.clip(cos, 0.0, 1.0)  # descending -> angles ascending
    theta = np.arccos(cos)
    small = cos**2 >= 0.5
    if np.any(small):
        resid = t.basis - s.basis @ (s.basis.T @ t.basis)
        sin = np.linalg.svd(resid, compute_uv=False)
        sin = np.clip(np.sort(sin)[: t.dim][:k], 0.0, 1.0)  # ascending
        theta[small] = np.arcsin(sin[small])
    return theta


def is_direct_sum(s: Subspace, t: Subspace, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """True iff the subspaces intersect trivially."""
    return s.intersect(t, tol).dim == 0


def range_of(m, tol: ToleranceContext = DEFAULT_TOL, scale: float | None = None) -> Subspace:
    """Column space of a matrix.

    ``scale`` floors the rank reference for matrices built by cancellation
    from inputs of that norm (see :func:`shortops.core.svd_rank`).
    """
    m = as_matrix(m)
    rank, _, left, _ = svd_rank(m, tol, scale)
    return Subspace(ambient_dim=m.shape[0], basis=left[:, :rank])


def nullspace_of(m, tol: ToleranceContext = DEFAULT_TOL, scale: float | None = None) -> Subspace:
    """Kernel of a matrix (``scale`` as in :func:`range_of`)."""
    m = as_matrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    if s.size == 0:
        rank = 0
    else:
        ref = max(float(s[0]), scale or 0.0)
        rank = int(np.sum(s > tol.rank_cutoff(m.shape) * ref))
    return Subspace(ambient_dim=m.shape[1], basis=vh[rank:, :].T)


def preimage(m, s: Subspace, tol: ToleranceContext = DEFAULT_TOL) -> Subspace:
    """The set ``{x : Mx in S}``.

    Computed as the kernel of ``(I - P_S) M``; always contains the kernel
    of ``M`` itself. ``(I - P_S) M`` can be pure cancellation noise (e.g.
    when ``R(M)`` lies inside ``S``), so its rank reference is floored by
    the norm of ``M``.
    """
    m = as_matrix(m)
    if m.shape[0] != s.ambient_dim:
        raise ShapeMismatchError(
            f"matrix codomain {m.shape[0]} does not match subspace ambient "
            f"dimension {s.ambient_dim}"
        )
    residual = m - s.projector() @ m
    return nullspace_of(residual, tol, scale=spectral_norm(m))
