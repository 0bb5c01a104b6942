"""Single source of truth for every tolerance-based decision.

Rank truncation, subspace equality, and semidefinite-order comparisons all
route through one :class:`ToleranceContext` so that a borderline quantity is
decided the same way everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class ToleranceContext:
    """Thresholds governing all floating-point decisions.

    Parameters
    ----------
    rank_rel_tol:
        Relative singular-value cutoff for rank decisions. ``None`` (the
        default) selects the dimension-adaptive value ``64*eps*max(m, n)``,
        relative to the largest singular value of the matrix at hand.
    angle_tol:
        Threshold in radians on principal angles for subspace equality and
        containment.
    loewner_tol:
        Relative threshold on eigenvalues of a difference when deciding
        ``A <= B`` in the semidefinite order.
    psd_clip_tol:
        Relative threshold below which negative eigenvalues are clipped to
        zero during positive-semidefinite construction; anything more
        negative rejects the input.
    """

    rank_rel_tol: float | None = None
    angle_tol: float = 1e-8
    loewner_tol: float = 1e-10
    psd_clip_tol: float = 1e-12

    def __post_init__(self):
        named = {
            "rank_rel_tol": self.rank_rel_tol,
            "angle_tol": self.angle_tol,
            "loewner_tol": self.loewner_tol,
            "psd_clip_tol": self.psd_clip_tol,
        }
        for name, value in named.items():
            if value is None:
                continue
            if not (0.0 < value < 1e-2):
                raise ValueError(f"{name} must lie in (0, 1e-2), got {value!r}")

    def rank_cutoff(self, shape: tuple[int, int]) -> float:
        """Relative cutoff used for rank decisions on a matrix of ``shape``."""
        if self.rank_rel_tol is not None:
            return self.rank_rel_tol
        return 64.0 * _EPS * max(shape)


DEFAULT_TOL = ToleranceContext()
