"""Randomized verification suites over seeded generators.

Each suite replays the invariants of one library area against freshly
generated instances. A failing check records the per-trial seed, a digest
of the inputs, the assertion name, and the measured residual, which is
enough to replay the trial in isolation. Reports are byte-deterministic
for a fixed seed, apart from the elapsed-time field.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import loewner_leq, pinv, spectral_norm, sqrt_psd, svd_rank
from .errors import PreconditionViolated
from .generators import (
    complementary_pair,
    digest_inputs,
    mix_seed,
    mixed_pair,
    orthonormal_frame,
    overlapping_adjoint_pair,
    random_psd,
    random_subspace,
    rank_additive_pair,
    separated_psd_pair,
    separated_subspace,
    well_conditioned,
)
from .pinv_sum import (
    pinv_sum,
    pinv_sum_left,
    pinv_sum_residuals,
)
from .projections import (
    compatible_projection,
    oblique,
    pinv_of_projection,
    pinv_of_projector_product,
    projection_solution,
)
from .ranges import (
    disjoint_range_agreement,
    gram_sum_range,
    is_compatible,
    is_range_additive,
    nullspace_cover_report,
    order_square_check,
    preimage_cover_additive,
    psd_closed_range_report,
    range_additivity_report,
    reduced_solution,
    solvability_iff_additive,
)
from .shorted import (
    parallel_sum,
    parallel_sum_block,
    parallel_sum_reduced,
    shorted_parallel_approx,
    shorted_schur,
    shorted_sqrt,
)
from .subspaces import (
    Subspace,
    is_direct_sum,
    nullspace_of,
    preimage,
    principal_angles,
    range_of,
)
from .tolerance import DEFAULT_TOL, ToleranceContext

__all__ = ["Failure", "VerificationReport", "SUITE_NAMES", "run_suite"]

_ERROR_RESIDUAL = 1e300  # sentinel kept JSON-safe (no Infinity)


@dataclass(frozen=True)
class Failure:
    trial_seed: int
    inputs_digest: str
    assertion_name: str
    measured_residual: float

    def to_dict(self) -> dict:
        return {
            "trial_seed": self.trial_seed,
            "inputs_digest": self.inputs_digest,
            "assertion_name": self.assertion_name,
            "measured_residual": self.measured_residual,
        }


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    trials: int
    dims: str
    seed: int
    failures: list[Failure]
    elapsed_ms: int

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "dims": self.dims,
            "seed": self.seed,
            "failures": [f.to_dict() for f in self.failures],
            "elapsed_ms": self.elapsed_ms,
        }


class _Recorder:
    """Collects failures for one trial."""

    def __init__(self, failures: list[Failure], trial_seed: int):
        self._failures = failures
        self._seed = trial_seed

    def residual(self, name: str, value: float, limit: float, inputs):
        value = float(value)
        if not value <= limit:
            self._failures.append(
                Failure(self._seed, digest_inputs(*inputs), name, value)
            )

    def flag(self, name: str, ok: bool, inputs):
        if not ok:
            self._failures.append(
                Failure(self._seed, digest_inputs(*inputs), name, 1.0)
            )


# ---------------------------------------------------------------------------
# suites


def _suite_core(rng, lo, hi, tol, rec):
    n = int(rng.integers(lo, hi + 1))
    m = int(rng.integers(lo, hi + 1))
    mat = rng.standard_normal((n, m))
    mp = pinv(mat, tol)
    scale = max(1.0, spectral_norm(mat), spectral_norm(mp))
    rec.residual("penrose_reconstruct", spectral_norm(mat @ mp @ mat - mat), 1e-10 * scale, (mat,))
    rec.residual("penrose_self", spectral_norm(mp @ mat @ mp - mp), 1e-10 * scale, (mat,))
    rec.residual("penrose_left_symmetric", spectral_norm((mat @ mp).T - mat @ mp), 1e-10 * scale, (mat,))
    rec.residual("penrose_right_symmetric", spectral_norm((mp @ mat).T - mp @ mat), 1e-10 * scale, (mat,))
    rec.residual(
        "pinv_involution",
        spectral_norm(pinv(mp, tol) - mat),
        1e-9 * max(1.0, spectral_norm(mat)),
        (mat,),
    )
    q_left = orthonormal_frame(rng, n, n)
    q_right = orthonormal_frame(rng, m, m)
    rec.flag(
        "rank_orthogonal_invariance",
        svd_rank(mat, tol)[0] == svd_rank(q_left @ mat @ q_right.T, tol)[0],
        (mat,),
    )
    a = random_psd(rng, n)
    root = sqrt_psd(a, tol)
    rec.residual(
        "sqrt_squares_back",
        spectral_norm(root.matrix @ root.matrix - a.matrix),
        1e-11 * max(1.0, a.norm),
        (a.matrix,),
    )
    rec.flag("psd_above_zero", loewner_leq(np.zeros((n, n)), a.matrix, tol), (a.matrix,))
    rec.flag(
        "sqrt_same_range",
        range_of(root.matrix, tol).equals(range_of(a.matrix, tol), tol),
        (a.matrix,),
    )


def _suite_subspace(rng, lo, hi, tol, rec):
    n = int(rng.integers(lo, hi + 1))
    s = random_subspace(rng, n)
    t = random_subspace(rng, n)
    rec.flag(
        "de_morgan",
        s.sum(t, tol).complement().equals(s.complement().intersect(t.complement(), tol), tol),
        (s.basis, t.basis),
    )
    proj = s.projector()
    rec.residual("projector_idempotent", spectral_norm(proj @ proj - proj), 1e-12, (s.basis,))
    rec.residual("projector_symmetric", spectral_norm(proj - proj.T), 1e-12, (s.basis,))
    rec.flag("projector_rank", svd_rank(proj, tol)[0] == s.dim, (s.basis,))
    rec.flag(
        "dim_identity",
        s.dim + t.dim == s.sum(t, tol).dim + s.intersect(t, tol).dim,
        (s.basis, t.basis),
    )
    rec.flag(
        "direct_sum_duality",
        is_direct_sum(s, t, tol) == (s.sum(t, tol).dim == s.dim + t.dim),
        (s.basis, t.basis),
    )
    m_rows = int(rng.integers(lo, hi + 1))
    mat = rng.standard_normal((m_rows, n))
    target = random_subspace(rng, m_rows)
    pre = preimage(mat, target, tol)
    rec.flag("preimage_contains_kernel", pre.contains(nullspace_of(mat, tol), tol), (mat, target.basis))
    rec.flag(
        "preimage_of_everything",
        preimage(mat, Subspace.full(m_rows), tol).dim == n,
        (mat,),
    )


def _random_complement(rng, s: Subspace, min_angle: float = 1e-3) -> Subspace:
    n = s.ambient_dim
    while True:
        cand = random_subspace(rng, n, n - s.dim)
        if s.sum(cand).dim != n:
            continue
        angles = principal_angles(s, cand)
        if angles.size == 0 or angles[0] >= min_angle:
            return cand


def _suite_projections(rng, lo, hi, tol, rec):
    n = max(2, int(rng.integers(lo, hi + 1)))
    m_sub, n_sub = complementary_pair(rng, n)
    q = oblique(m_sub, n_sub, tol)
    pg = pinv_of_projection(q, tol)
    rec.residual(
        "projection_pinv_product_form",
        spectral_norm(pg - pinv(q.matrix, tol)),
        1e-10 * max(1.0, spectral_norm(pg)),
        (q.matrix,),
    )
    rec.residual(
        "projection_pinv_roundtrip",
        spectral_norm(pinv(pg, tol) - q.matrix),
        1e-9 * max(1.0, spectral_norm(q.matrix)),
        (q.matrix,),
    )
    u = random_subspace(rng, n)
    v = random_subspace(rng, n)
    prod = pinv_of_projector_product(u, v, tol)
    rec.flag(
        "product_pinv_range_packaging",
        range_of(prod.matrix, tol).equals(prod.range, tol),
        (u.basis, v.basis),
    )
    rec.flag(
        "product_pinv_kernel_packaging",
        nullspace_of(prod.matrix, tol).equals(prod.nullsp, tol),
        (u.basis, v.basis),
    )

    a = random_psd(rng, n)
    s = separated_subspace(rng, n, (range_of(a.matrix, tol),))
    e = compatible_projection(a, s, tol)
    rec.residual(
        "weighted_projection_selfadjoint",
        spectral_norm(a.matrix @ e.matrix - e.matrix.T @ a.matrix),
        1e-10 * max(1.0, a.norm),
        (a.matrix, s.basis),
    )
    rec.residual(
        "weighted_projection_idempotent",
        spectral_norm(e.matrix @ e.matrix - e.matrix),
        1e-10 * max(1.0, spectral_norm(e.matrix) ** 2),
        (a.matrix, s.basis),
    )
    rec.flag(
        "weighted_projection_range", range_of(e.matrix, tol).equals(s, tol), (a.matrix, s.basis)
    )
    proj = s.projector()
    rec.flag(
        "projected_range_characterization",
        range_of(proj @ a.matrix @ proj, tol).equals(range_of(proj @ a.matrix, tol), tol),
        (a.matrix, s.basis),
    )

    cut = shorted_sqrt(a, s, tol)
    witness = _random_complement(rng, s)
    f = oblique(s, witness, tol).matrix
    rec.flag(
        "shorted_below_squeezed",
        loewner_leq(cut.matrix, f @ a.matrix @ f.T, tol),
        (a.matrix, s.basis, witness.basis),
    )
    e_perp = compatible_projection(a, s.complement(), tol)
    attained = (np.eye(n) - e_perp.matrix).T
    rec.residual(
        "shorted_infimum_attained",
        spectral_norm(attained @ a.matrix @ attained.T - cut.matrix),
        1e-10 * max(1.0, a.norm),
        (a.matrix, s.basis),
    )

    if rng.random() < 0.5:
        raw_a, raw_b = overlapping_adjoint_pair(rng, n)
        lhs, rhs = raw_a.T, raw_b.T  # adjoint ranges disjoint, ranges overlap
    else:
        ra = int(rng.integers(0, n // 2 + 1))
        rb = int(rng.integers(0, n - ra + 1))
        lhs, rhs = rank_additive_pair(rng, n, n, ra, rb)
    solution = projection_solution(lhs, rhs, tol)
    rec.residual(
        "projection_solves_equation",
        spectral_norm((lhs + rhs) @ solution.matrix - lhs),
        1e-10 * max(1.0, spectral_norm(lhs + rhs)),
        (lhs, rhs),
    )


def _suite_shorted(rng, lo, hi, tol, rec):
    n = int(rng.integers(lo, hi + 1))
    # range-equality checks on pseudoinverse products carry noise of order
    # eps/sin^2(theta); a 3e-2 angle floor keeps that below the PSD noise
    # cleanup threshold
    a, b = separated_psd_pair(rng, n, min_angle=3e-2)
    s = separated_subspace(
        rng, n, (range_of(a.matrix, tol), range_of(b.matrix, tol))
    )
    cut = shorted_sqrt(a, s, tol)
    rec.residual(
        "shorted_routes_agree",
        spectral_norm(cut.matrix - shorted_schur(a, s, tol).matrix),
        1e-10 * a.norm if a.norm else 0.0,
        (a.matrix, s.basis),
    )
    rec.flag("shorted_below_operator", loewner_leq(cut.matrix, a.matrix, tol), (a.matrix, s.basis))
    rec.flag("shorted_range_inside", s.contains(range_of(cut.matrix, tol), tol), (a.matrix, s.basis))
    rec.flag(
        "shorted_range_is_meet",
        range_of(cut.matrix, tol).equals(range_of(a.matrix, tol).intersect(s, tol), tol),
        (a.matrix, s.basis),
    )
    rec.flag(
        "shorted_kernel_is_join",
        nullspace_of(cut.matrix, tol).equals(
            nullspace_of(a.matrix, tol).sum(s.complement(), tol), tol
        ),
        (a.matrix, s.basis),
    )
    rec.flag(
        "shorted_superadditive",
        loewner_leq(
            cut.matrix + shorted_sqrt(b, s, tol).matrix,
            shorted_sqrt(a.matrix + b.matrix, s, tol).matrix,
            tol,
        ),
        (a.matrix, b.matrix, s.basis),
    )
    rec.flag(
        "residual_range_misses_subspace",
        range_of(a.matrix - cut.matrix, tol, scale=a.norm).intersect(s, tol).dim == 0,
        (a.matrix, s.basis),
    )
    resid_range = range_of(a.matrix - cut.matrix, tol, scale=a.norm)
    cut_range = range_of(cut.matrix, tol)
    rec.flag(
        "range_splits_directly",
        is_direct_sum(resid_range, cut_range, tol)
        and resid_range.sum(cut_range, tol).equals(range_of(a.matrix, tol), tol),
        (a.matrix, s.basis),
    )

    absorb_s = range_of(b.matrix, tol)
    combined = shorted_sqrt(a.matrix + b.matrix, absorb_s, tol)
    rec.residual(
        "shorted_absorbs_summand",
        spectral_norm(combined.matrix - (shorted_sqrt(a, absorb_s, tol).matrix + b.matrix)),
        1e-10 * max(1.0, a.norm + b.norm),
        (a.matrix, b.matrix),
    )
    rec.flag("absorbed_range", range_of(combined.matrix, tol).equals(absorb_s, tol), (a.matrix, b.matrix))
    rec.flag(
        "absorbed_kernel",
        nullspace_of(combined.matrix, tol).equals(absorb_s.complement(), tol),
        (a.matrix, b.matrix),
    )

    par = parallel_sum(a, b, tol)
    scale = max(1.0, a.norm, b.norm)
    rec.residual(
        "parallel_commutes",
        spectral_norm(par.matrix - parallel_sum(b, a, tol).matrix),
        1e-10 * scale,
        (a.matrix, b.matrix),
    )
    rec.residual(
        "parallel_reduced_route",
        spectral_norm(par.matrix - parallel_sum_reduced(a, b, tol).matrix),
        1e-10 * scale,
        (a.matrix, b.matrix),
    )
    rec.residual(
        "parallel_block_route",
        spectral_norm(par.matrix - parallel_sum_block(a, b, tol).matrix),
        1e-9 * scale,
        (a.matrix, b.matrix),
    )
    rec.flag(
        "parallel_range_is_meet",
        range_of(par.matrix, tol).equals(
            range_of(a.matrix, tol).intersect(range_of(b.matrix, tol), tol), tol
        ),
        (a.matrix, b.matrix),
    )
    previous = None
    # once distances hit the fp-noise shelf of the conditioned product the
    # ordering carries no information
    floor = 1e-6 * max(1.0, a.norm)
    for weight in (1, 10, 100, 1000):
        step = shorted_parallel_approx(a, s, weight, tol)
        distance = spectral_norm(step.matrix - cut.matrix)
        if previous is not None:
            rec.flag(
                f"approx_monotone_n{weight}",
                distance <= previous + 1e-12 or distance <= floor,
                (a.matrix, s.basis),
            )
        previous = distance


def _suite_ranges(rng, lo, hi, tol, rec):
    n = int(rng.integers(lo, hi + 1))
    x, y, kind = mixed_pair(rng, n)
    report = range_additivity_report(x, y, tol)
    rec.flag(
        "preimage_route_agrees",
        preimage_cover_additive(x, y, tol) == report.additive,
        (x, y),
    )
    cover = nullspace_cover_report(x, y, tol)
    rec.flag(
        "cover_matches_disjoint_rows",
        cover.adjoint_ranges_disjoint == cover.nullspaces_cover,
        (x, y),
    )
    rec.flag("solvability_route_agrees", solvability_iff_additive(x, y, tol), (x, y))
    if kind == "nonadditive":
        rec.flag("forced_nonadditive", not report.additive, (x, y))
    if kind == "rank_additive":
        rec.flag("forced_additive", report.additive, (x, y))
    rec.flag("symmetric_pair", is_range_additive(y, x, tol) == report.additive, (x, y))

    invertible = well_conditioned(rng, n)
    piece = rng.standard_normal((n, n))
    rec.flag(
        "surjective_split_additive",
        is_range_additive(piece, invertible - piece, tol),
        (invertible, piece),
    )
    gram_sum_range(x, y, tol)  # asserts internally

    a = random_psd(rng, n)
    b = random_psd(rng, n)
    s = random_subspace(rng, n)
    rec.flag("psd_pair_additive", is_range_additive(a.matrix, b.matrix, tol), (a.matrix, b.matrix))
    rec.flag("psd_compatible", is_compatible(a, s, tol), (a.matrix, s.basis))
    rec.flag(
        "complement_projector_additivity",
        is_range_additive(a.matrix, np.eye(n) - s.projector(), tol)
        == is_compatible(a, s, tol),
        (a.matrix, s.basis),
    )
    five = psd_closed_range_report(a, b, tol)
    rec.flag(
        "five_conditions_hold",
        five.additive and five.compatible_a_nullspace_b and five.compatible_b_nullspace_a
        and five.split_direct,
        (a.matrix, b.matrix),
    )
    # squaring doubles the log-condition: the squared spectrum stays above
    # every rank cutoff only when the range angles are comfortably wide
    sq_a, sq_b = separated_psd_pair(rng, n, min_angle=3e-2)
    rec.flag(
        "square_order_route", order_square_check(sq_a, sq_b, tol), (sq_a.matrix, sq_b.matrix)
    )

    if n >= 2:
        r1 = int(rng.integers(1, n))
        r2 = int(rng.integers(1, n - r1 + 1))
        frame = orthonormal_frame(rng, n, r1 + r2) @ well_conditioned(rng, r1 + r2)
        left = frame[:, :r1] @ frame[:, :r1].T
        right = frame[:, r1:] @ frame[:, r1:].T
        rec.flag("disjoint_psd_agreement", disjoint_range_agreement(left, right, tol), (left, right))

    tall = rng.standard_normal((n, max(1, n - 1)))
    inside = tall @ rng.standard_normal((tall.shape[1], n))
    solution, lam = reduced_solution(tall, inside, tol)
    rec.residual(
        "reduced_solves",
        spectral_norm(tall @ solution - inside),
        1e-10 * max(1.0, spectral_norm(inside)),
        (tall, inside),
    )
    rec.flag(
        "reduced_bound_holds",
        loewner_leq(inside @ inside.T, lam * (tall @ tall.T), tol),
        (tall, inside),
    )
    kernel = nullspace_of(tall, tol)
    if kernel.dim:
        spoiled = solution + np.outer(kernel.basis[:, 0], rng.standard_normal(inside.shape[1]))
        rec.flag(
            "reduced_unique_in_rowspace",
            not nullspace_of(tall, tol).complement().contains(range_of(spoiled, tol), tol),
            (tall, inside),
        )


def _suite_ff(rng, lo, hi, tol, rec):
    n = max(2, int(rng.integers(lo, hi + 1)))
    m = n if rng.random() < 0.7 else max(2, int(rng.integers(lo, hi + 1)))
    top = int(rng.integers(0, min(m, n) + 1))
    ra = int(rng.integers(0, top + 1))
    rb = top - ra
    a, b = rank_additive_pair(rng, m, n, ra, rb)
    x = pinv_sum(a, b, tol)
    direct = pinv(a + b, tol)
    rec.residual(
        "update_matches_direct",
        spectral_norm(x - direct) / max(spectral_norm(direct), 1e-15),
        1e-9,
        (a, b),
    )
    for name, value in pinv_sum_residuals(a, b, tol, value=x).items():
        rec.residual(name, value, 1e-9, (a, b))
    left = nullspace_of(b, tol).complement().projector() @ nullspace_of(a, tol).projector()
    rec.residual(
        "left_correction_is_product_pinv",
        spectral_norm(pinv_sum_left(a, b, tol).matrix - pinv(left, tol)),
        1e-10 * max(1.0, spectral_norm(pinv(left, tol))),
        (a, b),
    )
    zero = np.zeros_like(a)
    rec.residual(
        "zero_summand_degenerates",
        spectral_norm(pinv_sum(a, zero, tol) - pinv(a, tol)),
        1e-10 * max(1.0, spectral_norm(pinv(a, tol))),
        (a,),
    )
    if n >= 2:
        bad_a, bad_b = overlapping_adjoint_pair(rng, n)
        try:
            pinv_sum(bad_a, bad_b, tol)
            rejected = False
        except PreconditionViolated:
            rejected = True
        rec.flag("precheck_rejects_nonadditive", rejected, (bad_a, bad_b))


_SUITES = {
    "core": _suite_core,
    "subspace": _suite_subspace,
    "projections": _suite_projections,
    "shorted": _suite_shorted,
    "ranges": _suite_ranges,
    "ff-oracle": _suite_ff,
}

SUITE_NAMES = tuple(_SUITES) + ("all",)


def run_suite(
    suite: str,
    trials: int,
    dims: tuple[int, int] = (2, 12),
    seed: int = 0,
    tol: ToleranceContext = DEFAULT_TOL,
) -> VerificationReport:
    """Run a named suite (or ``all``) for the given number of trials.

    Per-trial seeds derive from the root seed and a global trial index, so
    any failure replays independently of the others.
    """
    if suite not in SUITE_NAMES:
        raise KeyError(f"unknown suite {suite!r}; known: {', '.join(SUITE_NAMES)}")
    lo, hi = dims
    if not (1 <= lo <= hi):
        raise ValueError(f"bad dimension range {dims}")
    names = list(_SUITES) if suite == "all" else [suite]
    failures: list[Failure] = []
    start = time.perf_counter()
    for block, name in enumerate(names):
        fn = _SUITES[name]
        for trial in range(trials):
            trial_seed = mix_seed(seed, block * 1_000_003 + trial)
            rng = np.random.default_rng(trial_seed)
            rec = _Recorder(failures, trial_seed)
            try:
                fn(rng, lo, hi, tol, rec)
            except AssertionError as exc:
                failures.append(
                    Failure(trial_seed, "", f"{name}: internal assertion: {exc}", _ERROR_RESIDUAL)
                )
            except Exception as exc:  # pragma: no cover - defensive harness
                failures.append(
                    Failure(
                        trial_seed,
                        "",
                        f"{name}: {type(exc).__name__}: {exc}",
                        _ERROR_RESIDUAL,
                    )
                )
    elapsed_ms = int(round(1000.0 * (time.perf_counter() - start)))
    return VerificationReport(
        suite=suite,
        trials=trials,
        dims=f"{lo}..{hi}",
        seed=seed,
        failures=failures,
        elapsed_ms=elapsed_ms,
    )
