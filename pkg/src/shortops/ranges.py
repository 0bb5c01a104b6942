"""Executable range calculus: additivity, factorization, compatibility.

Every set-theoretic statement ("these ranges fill the space", "this range
contains that one") is decided through rank and principal-angle decisions
governed by the shared :class:`~shortops.tolerance.ToleranceContext`; no
predicate ever compares floats for equality.

Conditions that are about closedness of subspaces are vacuously true at
finite dimension. They are still reported, flagged as degenerate, so the
reports keep a one-to-one correspondence with the underlying theory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import as_matrix, as_psd, pinv, spectral_norm, sqrt_psd
from .errors import PreconditionViolated, RangeNotContained, ShapeMismatchError
from .shorted import shorted_sqrt
from .subspaces import Subspace, is_direct_sum, nullspace_of, preimage, range_of
from .tolerance import DEFAULT_TOL, ToleranceContext

__all__ = [
    "is_range_additive",
    "RangeAdditivityReport",
    "range_additivity_report",
    "preimage_cover_additive",
    "NullspaceCoverReport",
    "nullspace_cover_report",
    "reduced_solution",
    "solvability_iff_additive",
    "compatibility_characterizations",
    "is_compatible",
    "PsdClosedRangeReport",
    "psd_closed_range_report",
    "disjoint_range_agreement",
    "order_equivalent",
    "gram_sum_range",
    "order_square_check",
]


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


def is_range_additive(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """True iff ``R(A + B) = R(A) + R(B)``.

    The inclusion of the left side in the right is automatic, so equality
    is a rank comparison.
    """
    a, b = _pair(a, b)
    scale = max(spectral_norm(a), spectral_norm(b))
    rank_sum = range_of(a, tol).sum(range_of(b, tol), tol).dim
    rank_total = range_of(a + b, tol, scale=scale).dim
    return rank_total == rank_sum


@dataclass(frozen=True)
class RangeAdditivityReport:
    """All equivalent characterizations of range additivity, evaluated
    independently, plus the adjoint-side verdict."""

    additive: bool
    cond_contains_a: bool  # R(A) inside R(A+B)
    cond_contains_b: bool  # R(B) inside R(A+B)
    cond_contains_diff: bool  # R(A-B) inside R(A+B)
    intersection_dim: int  # dim R(A) & R(B)
    preimage_cover: bool  # A^{-1}(R(B)) + B^{-1}(R(A)) fills the space
    adjoint_additive: bool


def range_additivity_report(a, b, tol: ToleranceContext = DEFAULT_TOL) -> RangeAdditivityReport:
    a, b = _pair(a, b)
    scale = max(spectral_norm(a), spectral_norm(b))
    total = range_of(a + b, tol, scale=scale)
    ra = range_of(a, tol)
    rb = range_of(b, tol)
    report = RangeAdditivityReport(
        additive=is_range_additive(a, b, tol),
        cond_contains_a=total.contains(ra, tol),
        cond_contains_b=total.contains(rb, tol),
        cond_contains_diff=total.contains(range_of(a - b, tol, scale=scale), tol),
        intersection_dim=ra.intersect(rb, tol).dim,
        preimage_cover=preimage(a, rb, tol).sum(preimage(b, ra, tol), tol).dim
        == a.shape[1],
        adjoint_additive=is_range_additive(a.T, b.T, tol),
    )
    # the four conditions are equivalent theorems; disagreement means a
    # tolerance decision flipped on a borderline input
    assert (
        report.additive
        == report.cond_contains_a
        == report.cond_contains_b
        == report.cond_contains_diff
    ), f"equivalent additivity conditions disagree: {report}"
    return report


def preimage_cover_additive(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Range additivity decided through preimages.

    True iff ``R(A) & R(B)`` is inside ``R(A+B)`` and the preimages
    ``A^{-1}(R(B))`` and ``B^{-1}(R(A))`` together fill the domain. Always
    agrees with :func:`is_range_additive`; the two provide independent
    routes to the same predicate.
    """
    a, b = _pair(a, b)
    ra = range_of(a, tol)
    rb = range_of(b, tol)
    meet = ra.intersect(rb, tol)
    scale = max(spectral_norm(a), spectral_norm(b))
    if not range_of(a + b, tol, scale=scale).contains(meet, tol):
        return False
    cover = preimage(a, rb, tol).sum(preimage(b, ra, tol), tol)
    return cover.dim == a.shape[1]


class NullspaceCoverReport(NamedTuple):
    adjoint_ranges_disjoint: bool  # R(A^T) & R(B^T) = {0}
    nullspaces_cover: bool  # N(A) + N(B) fills the domain
    additive: bool


def nullspace_cover_report(a, b, tol: ToleranceContext = DEFAULT_TOL) -> NullspaceCoverReport:
    """Nullspace-cover conditions and their one-way relation to additivity.

    The first two conditions are equivalent, and imply the third; the
    converse holds when the ranges intersect trivially. Those implications
    are asserted on every call.
    """
    a, b = _pair(a, b)
    cond1 = range_of(a.T, tol).intersect(range_of(b.T, tol), tol).dim == 0
    cond2 = nullspace_of(a, tol).sum(nullspace_of(b, tol), tol).dim == a.shape[1]
    cond3 = is_range_additive(a, b, tol)
    assert cond1 == cond2, "adjoint-range disjointness and nullspace cover disagree"
    assert (not cond2) or cond3, "nullspace cover without range additivity"
    if range_of(a, tol).intersect(range_of(b, tol), tol).dim == 0:
        assert (not cond3) or cond2, "additivity with disjoint ranges but no cover"
    return NullspaceCoverReport(cond1, cond2, cond3)


def reduced_solution(
    a, b, tol: ToleranceContext = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """The reduced solution of ``A X = B``.

    Requires ``R(B)`` inside ``R(A)``. Returns the unique solution ``D``
    whose range lies in ``N(A)^perp``, together with the smallest constant
    ``lambda`` for which ``B B^T <= lambda A A^T`` (which is ``|D|^2``).
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatchError(
            f"codomains differ: {a.shape[0]} vs {b.shape[0]}"
        )
    if not range_of(a, tol).contains(range_of(b, tol), tol):
        raise RangeNotContained("range_contained", "R(B) is not inside R(A)")
    d = pinv(a, tol) @ b
    resid = spectral_norm(a @ d - b)
    assert resid <= 1e-10 * max(1.0, spectral_norm(b)), f"A D != B ({resid:.3e})"
    assert nullspace_of(a, tol).complement().contains(range_of(d, tol), tol)
    return d, spectral_norm(d) ** 2


def solvability_iff_additive(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Agreement bit: ``A X = B`` is solvable iff ``(A - B, B)`` is range
    additive. Should always return True; exposed as a checkable identity."""
    a, b = _pair(a, b)
    solvable = range_of(a, tol).contains(range_of(b, tol), tol)
    return solvable == is_range_additive(a - b, b, tol)


def compatibility_characterizations(
    a, s: Subspace, tol: ToleranceContext = DEFAULT_TOL
) -> tuple[bool, bool, bool]:
    """Three independent tests of compatibility of a PSD matrix with a
    subspace.

    1. decomposition: ``S + (A S)^perp`` fills the space;
    2. projected ranges: ``R(P_S A P_S) = R(P_S A)``;
    3. shorted-operator criterion: ``R([S^perp]A)`` inside ``R(A)`` and
       ``N([S^perp]A) = N(A) + S``.

    All three are automatic at finite dimension, so they must agree; they
    are still computed separately because each exercises different
    machinery.
    """
    a = as_psd(a, tol)
    if a.dim != s.ambient_dim:
        raise ShapeMismatchError("dimension mismatch")
    proj = s.projector()
    image_perp = range_of(a.matrix @ proj, tol, scale=a.norm).complement()
    c1 = s.sum(image_perp, tol).dim == a.dim

    c2 = range_of(proj @ a.matrix @ proj, tol, scale=a.norm).equals(
        range_of(proj @ a.matrix, tol, scale=a.norm), tol
    )

    cut = shorted_sqrt(a, s.complement(), tol)
    kernel_target = nullspace_of(a.matrix, tol).sum(s, tol)
    c3 = range_of(a.matrix, tol).contains(range_of(cut.matrix, tol), tol) and nullspace_of(
        cut.matrix, tol
    ).equals(kernel_target, tol)
    return c1, c2, c3


def is_compatible(a, s: Subspace, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Compatibility of a PSD matrix with a subspace.

    Decided by the decomposition criterion; the other two characterizations
    are computed as well and must agree.
    """
    c1, c2, c3 = compatibility_characterizations(a, s, tol)
    assert c1 == c2 == c3, f"compatibility characterizations disagree: {(c1, c2, c3)}"
    return c1


@dataclass(frozen=True)
class PsdClosedRangeReport:
    """Five equivalent conditions for a pair of PSD matrices.

    The two closedness conditions are vacuously true at finite dimension
    and are flagged in ``degenerate``; the remaining three are computed
    independently. ``split_direct`` checks that ``R(B)`` and ``A N(B)``
    intersect trivially."""

    compatible_a_nullspace_b: bool
    nullspace_sum_closed: bool
    compatible_b_nullspace_a: bool
    range_sum_closed: bool
    additive: bool
    split_direct: bool
    degenerate: tuple[str, ...] = field(
        default=("nullspace_sum_closed", "range_sum_closed")
    )


def psd_closed_range_report(a, b, tol: ToleranceContext = DEFAULT_TOL) -> PsdClosedRangeReport:
    a = as_psd(a, tol)
    b = as_psd(b, tol)
    if a.dim != b.dim:
        raise ShapeMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    null_b = nullspace_of(b.matrix, tol)
    report = PsdClosedRangeReport(
        compatible_a_nullspace_b=is_compatible(a, null_b, tol),
        nullspace_sum_closed=True,
        compatible_b_nullspace_a=is_compatible(b, nullspace_of(a.matrix, tol), tol),
        range_sum_closed=True,
        additive=is_range_additive(a.matrix, b.matrix, tol),
        split_direct=is_direct_sum(
            range_of(b.matrix, tol),
            range_of(a.matrix @ null_b.projector(), tol, scale=a.norm),
            tol,
        ),
    )
    flags = (
        report.compatible_a_nullspace_b,
        report.nullspace_sum_closed,
        report.compatible_b_nullspace_a,
        report.range_sum_closed,
        report.additive,
    )
    assert all(flags) or not any(flags), f"equivalent conditions disagree: {report}"
    return report


def disjoint_range_agreement(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """For PSD pairs with trivially intersecting ranges, additivity is the
    same as compatibility of ``A`` with ``N(B)``. Returns the agreement bit
    (always True); raises if the ranges actually intersect."""
    a = as_psd(a, tol)
    b = as_psd(b, tol)
    if a.dim != b.dim:
        raise ShapeMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    if range_of(a.matrix, tol).intersect(range_of(b.matrix, tol), tol).dim != 0:
        raise PreconditionViolated("ranges_disjoint", "ranges intersect nontrivially")
    additive = is_range_additive(a.matrix, b.matrix, tol)
    compatible = is_compatible(a, nullspace_of(b.matrix, tol), tol)
    return additive == compatible


def order_equivalent(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """True iff ``r A <= B <= s A`` for some positive ``r, s``; equivalently
    the PSD square roots have equal ranges."""
    a = as_psd(a, tol)
    b = as_psd(b, tol)
    if a.dim != b.dim:
        raise ShapeMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    return range_of(sqrt_psd(a, tol).matrix, tol).equals(
        range_of(sqrt_psd(b, tol).matrix, tol), tol
    )


def gram_sum_range(a, b, tol: ToleranceContext = DEFAULT_TOL) -> Subspace:
    """Range of ``(A A^T + B B^T)^{1/2}``, which equals ``R(A) + R(B)``.

    The equality is asserted on every call; the function exists so the
    identity can be exercised as a computation rather than a tautology.
    """
    a, b = _pair(a, b)
    gram = as_psd(a @ a.T + b @ b.T, tol)
    out = range_of(sqrt_psd(gram, tol).matrix, tol)
    assert out.equals(range_of(a, tol).sum(range_of(b, tol), tol), tol)
    return out


def order_square_check(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Agreement bit: a PSD pair is range additive iff ``(A+B)^2`` is
    order-equivalent to ``A^2 + B^2``. Always True; checkable identity."""
    a = as_psd(a, tol)
    b = as_psd(b, tol)
    if a.dim != b.dim:
        raise ShapeMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    total = a.matrix + b.matrix
    lhs = is_range_additive(a.matrix, b.matrix, tol)
    scale = max(a.norm, b.norm) ** 2 * 4.0
    rhs = order_equivalent(
        as_psd(total @ total, tol, scale=scale),
        as_psd(a.matrix @ a.matrix + b.matrix @ b.matrix, tol, scale=scale),
        tol,
    )
    return lhs == rhs
