"""Tolerance-governed dense kernels.

Everything else in the package is built on the four primitives here:
rank-revealing SVD, Moore-Penrose pseudoinverse, positive-semidefinite
square root, and the semidefinite ("Loewner") order comparison.

Matrices are plain float64 ``numpy`` arrays; the adjoint is the transpose
(real scalars only). :func:`as_matrix` is the boundary validator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPsd, NumericalKernelError, ShapeMismatchError
from .tolerance import DEFAULT_TOL, ToleranceContext

__all__ = [
    "as_matrix",
    "spectral_norm",
    "svd_rank",
    "pinv",
    "PsdMatrix",
    "as_psd",
    "sqrt_psd",
    "loewner_leq",
]


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float64 array with finite entries."""
    m = np.asarray(values, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-D, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def spectral_norm(m: np.ndarray) -> float:
    """Operator 2-norm (largest singular value)."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def _svd(m: np.ndarray):
    try:
        return np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalKernelError(f"SVD failed to converge: {exc}") from exc


def svd_rank(
    m: np.ndarray,
    tol: ToleranceContext = DEFAULT_TOL,
    scale: float | None = None,
) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
    """Rank-revealing SVD.

    Returns ``(rank, singular_values, left_basis, right_basis)`` where the
    rank counts singular values above ``cutoff * sigma_max``, the left basis
    (m x r) spans the column space and the right basis (n x r) spans the
    row space, both with orthonormal columns.

    ``scale`` floors the reference: a matrix assembled from inputs of norm
    ``scale`` whose largest singular value sits at roundoff level relative
    to that scale is pure cancellation noise and must rank as zero, which a
    purely relative cutoff can never conclude.
    """
    m = as_matrix(m)
    u, s, vh = _svd(m)
    if s.size == 0:
        rank = 0
    else:
        ref = max(float(s[0]), scale or 0.0)
        rank = int(np.sum(s > tol.rank_cutoff(m.shape) * ref))
    return rank, s, u[:, :rank], vh[:rank, :].T


def pinv(
    m: np.ndarray,
    tol: ToleranceContext = DEFAULT_TOL,
    scale: float | None = None,
) -> np.ndarray:
    """Moore-Penrose pseudoinverse via singular-value truncation.

    The rank decision is the same one :func:`svd_rank` makes, so projectors
    derived from ``m @ pinv(m)`` agree with the subspaces reported there.
    """
    m = as_matrix(m)
    rank, s, left, right = svd_rank(m, tol, scale)
    if rank == 0:
        return np.zeros((m.shape[1], m.shape[0]))
    return (right / s[:rank]) @ left.T


@dataclass(frozen=True, eq=False)
class PsdMatrix:
    """Symmetric positive-semidefinite matrix with a certified spectral
    factorization.

    ``matrix = eigvecs @ diag(spectrum) @ eigvecs.T`` with ``spectrum``
    nonincreasing and >= 0. Construct through :meth:`from_matrix` (or
    :func:`as_psd`), which symmetrizes, clips roundoff-level negative
    eigenvalues, and rejects anything genuinely indefinite.
    """

    dim: int
    matrix: np.ndarray
    spectrum: np.ndarray
    eigvecs: np.ndarray

    @classmethod
    def from_matrix(
        cls,
        values,
        tol: ToleranceContext = DEFAULT_TOL,
        scale: float | None = None,
        trusted: bool = False,
    ) -> "PsdMatrix":
        """Validate and factor a symmetric PSD matrix.

        ``scale`` widens the roundoff budget for matrices produced by
        internal computations: eigenvalues of magnitude up to
        ``psd_clip_tol * scale`` are treated as noise and zeroed, which is
        what lets an exactly-zero analytic result come out exactly zero.

        ``trusted`` marks results that a theorem guarantees PSD (shorted
        operators, parallel sums): conditioned product noise can push
        eigenvalues a few orders below ``-psd_clip_tol * scale``, so the
        rejection threshold loosens to a bug-guard at ``1e-6 * scale`` and
        everything negative above it clips to zero. User-facing
        construction leaves both unset and keeps the strict contract:
        negatives within ``psd_clip_tol`` of the top eigenvalue clip,
        anything worse rejects.
        """
        m = as_matrix(values, "psd matrix")
        n, n2 = m.shape
        if n != n2:
            raise ShapeMismatchError(f"psd matrix must be square, got {m.shape}")
        norm = spectral_norm(m)
        sym_budget = tol.loewner_tol * max(1.0, norm, scale or 0.0)
        if spectral_norm(m - m.T) > sym_budget:
            raise NotPsd("matrix is not symmetric within tolerance")
        sym = 0.5 * (m + m.T)
        try:
            w, v = np.linalg.eigh(sym)
        except np.linalg.LinAlgError as exc:
            raise NumericalKernelError(f"eigh failed: {exc}") from exc
        w = w[::-1].copy()
        v = v[:, ::-1].copy()
        lam_max = max(float(w[0]), 0.0) if n else 0.0
        ref = max(lam_max, scale or 0.0)
        reject = (1e-6 if trusted else tol.psd_clip_tol) * ref
        if float(w[-1] if n else 0.0) < -reject:
            raise NotPsd(
                f"eigenvalue {w.min():.3e} exceeds the roundoff budget {-reject:.3e}"
            )
        cleaned = w.copy()
        if scale is not None:
            cleaned[np.abs(cleaned) <= tol.psd_clip_tol * ref] = 0.0
        cleaned = np.clip(cleaned, 0.0, None)
        if not np.array_equal(cleaned, w):
            rebuilt = (v * cleaned) @ v.T
            sym = 0.5 * (rebuilt + rebuilt.T)
        return cls(dim=n, matrix=sym, spectrum=cleaned, eigvecs=v)

    @property
    def norm(self) -> float:
        return float(self.spectrum[0]) if self.dim else 0.0

    def rank(self, tol: ToleranceContext = DEFAULT_TOL) -> int:
        if self.dim == 0 or self.spectrum[0] == 0.0:
            return 0
        cutoff = tol.rank_cutoff((self.dim, self.dim)) * self.spectrum[0]
        return int(np.sum(self.spectrum > cutoff))

    def range_basis(self, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
        return self.eigvecs[:, : self.rank(tol)]


def as_psd(
    values,
    tol: ToleranceContext = DEFAULT_TOL,
    scale: float | None = None,
    trusted: bool = False,
) -> PsdMatrix:
    """Pass a :class:`PsdMatrix` through, or construct one from an array."""
    if isinstance(values, PsdMatrix):
        return values
    return PsdMatrix.from_matrix(values, tol, scale, trusted)


def sqrt_psd(a: PsdMatrix | np.ndarray, tol: ToleranceContext = DEFAULT_TOL) -> PsdMatrix:
    """Positive-semidefinite square root.

    Reuses the certified factorization, so the result has exactly the same
    eigenvectors as the input. Eigenvalues below the rank cutoff are zeroed
    first: the square root would otherwise amplify roundoff-level
    eigenvalues (sqrt(1e-17) ~ 3e-9) past the rank threshold and grow the
    computed range.
    """
    a = as_psd(a, tol)
    w = a.spectrum.copy()
    if a.dim and w[0] > 0.0:
        w[w <= tol.rank_cutoff((a.dim, a.dim)) * w[0]] = 0.0
    root = np.sqrt(w)
    s = (a.eigvecs * root) @ a.eigvecs.T
    return PsdMatrix(dim=a.dim, matrix=0.5 * (s + s.T), spectrum=root, eigvecs=a.eigvecs)


def _as_symmetric(values, tol: ToleranceContext, name: str) -> np.ndarray:
    if isinstance(values, PsdMatrix):
        return values.matrix
    m = as_matrix(values, name)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got {m.shape}")
    if spectral_norm(m - m.T) > tol.loewner_tol * max(1.0, spectral_norm(m)):
        raise ValueError(f"{name} is not symmetric within tolerance")
    return 0.5 * (m + m.T)


def loewner_leq(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Decide ``a <= b`` in the semidefinite order.

    True iff the smallest eigenvalue of ``b - a`` is at least
    ``-loewner_tol * max(1, |a|, |b|)``.
    """
    am = _as_symmetric(a, tol, "a")
    bm = _as_symmetric(b, tol, "b")
    if am.shape != bm.shape:
        raise ShapeMismatchError(f"shapes differ: {am.shape} vs {bm.shape}")
    diff = bm - am
    w = np.linalg.eigvalsh(0.5 * (diff + diff.T))
    bound = tol.loewner_tol * max(1.0, spectral_norm(am), spectral_norm(bm))
    return bool(w.min(initial=0.0) >= -bound)
