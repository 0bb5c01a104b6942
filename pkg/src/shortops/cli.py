"""``shortctl``: command-line front end.

One subcommand per major operation plus the randomized verification
harness and the update-formula benchmark. Exit codes: 0 success, 1
verification failures, 2 mathematical precondition violated, 3 parse or
shape error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import as_psd, pinv, spectral_norm
from .errors import NotPsd, PreconditionViolated, ShapeMismatchError
from .matio import MatrixParseError, load_matrix, load_subspace, save_matrix
from .pinv_sum import bench_update_vs_recompute, pinv_sum
from .ranges import compatibility_characterizations, range_additivity_report
from .shorted import parallel_sum, shorted_schur, shorted_sqrt
from .tolerance import ToleranceContext
from .verify import SUITE_NAMES, run_suite


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shortctl",
        description="Dense-matrix operator calculus: shorted operators, "
        "parallel sums, range additivity, and pseudoinverse updates.",
    )
    parser.add_argument("--tol-rank", type=float, default=None,
                        help="relative singular-value cutoff for rank decisions")
    parser.add_argument("--tol-angle", type=float, default=None,
                        help="principal-angle threshold (radians) for subspace equality")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pinv", help="Moore-Penrose pseudoinverse of a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("shorted", help="shorted operator of a PSD matrix to a subspace")
    p.add_argument("--matrix", required=True)
    p.add_argument("--subspace", required=True)
    p.add_argument("--method", choices=["sqrt", "schur", "both"], default="sqrt")
    p.add_argument("--out", default=None)

    p = sub.add_parser("parallel", help="parallel sum of two PSD matrices")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("ffsum", help="pseudoinverse of a sum via the rank-additive update formula")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("compat", help="compatibility of a PSD matrix with a subspace")
    p.add_argument("--matrix", required=True)
    p.add_argument("--subspace", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("rangeadd", help="range-additivity report for a matrix pair")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="run a randomized verification suite")
    p.add_argument("--suite", default="all", help=f"one of: {', '.join(SUITE_NAMES)}")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", default="2..12", help="dimension range, e.g. 2..12")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="time the pseudoinverse update formula vs recomputation")
    p.add_argument("--dims", default="8,32,128", help="comma-separated dimensions")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)

    return parser


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("SHORTCTL_SEED")
    if env is not None:
        return int(env)
    return 0


def _parse_dim_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError(f"expected a range like 2..12, got {text!r}")
    return int(lo), int(hi)


def _write_json(payload, path: str | None):
    text = json.dumps(payload, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dispatch(args, tol: ToleranceContext) -> int:
    if args.command == "pinv":
        save_matrix(pinv(load_matrix(args.matrix), tol), args.out)
        return 0

    if args.command == "shorted":
        weight = as_psd(load_matrix(args.matrix), tol)
        target = load_subspace(args.subspace, tol)
        if args.method == "schur":
            result = shorted_schur(weight, target, tol)
        else:
            result = shorted_sqrt(weight, target, tol)
        if args.method == "both":
            other = shorted_schur(weight, target, tol)
            residual = spectral_norm(result.matrix - other.matrix)
            print(f"route agreement residual: {residual:.3e}", file=sys.stderr)
        save_matrix(result.matrix, args.out)
        return 0

    if args.command == "parallel":
        result = parallel_sum(
            as_psd(load_matrix(args.a), tol), as_psd(load_matrix(args.b), tol), tol
        )
        save_matrix(result.matrix, args.out)
        return 0

    if args.command == "ffsum":
        save_matrix(pinv_sum(load_matrix(args.a), load_matrix(args.b), tol), args.out)
        return 0

    if args.command == "compat":
        weight = as_psd(load_matrix(args.matrix), tol)
        target = load_subspace(args.subspace, tol)
        c1, c2, c3 = compatibility_characterizations(weight, target, tol)
        _write_json(
            {
                "compatible": c1 and c2 and c3,
                "via_decomposition": c1,
                "via_projected_ranges": c2,
                "via_shorted": c3,
            },
            args.out,
        )
        return 0

    if args.command == "rangeadd":
        report = range_additivity_report(load_matrix(args.a), load_matrix(args.b), tol)
        _write_json(
            {
                "additive": report.additive,
                "cond_contains_a": report.cond_contains_a,
                "cond_contains_b": report.cond_contains_b,
                "cond_contains_diff": report.cond_contains_diff,
                "intersection_dim": report.intersection_dim,
                "preimage_cover": report.preimage_cover,
                "adjoint_additive": report.adjoint_additive,
            },
            args.out,
        )
        return 0

    if args.command == "verify":
        if args.suite not in SUITE_NAMES:
            print(f"unknown suite {args.suite!r}; known: {', '.join(SUITE_NAMES)}",
                  file=sys.stderr)
            return 3
        report = run_suite(
            args.suite,
            trials=args.trials,
            dims=_parse_dim_range(args.dims),
            seed=_resolve_seed(args.seed),
            tol=tol,
        )
        _write_json(report.to_dict(), args.out)
        if not report.passed:
            print(f"{len(report.failures)} failing checks", file=sys.stderr)
            return 1
        return 0

    if args.command == "bench":
        dims = [int(tok) for tok in args.dims.split(",") if tok.strip()]
        blocks = bench_update_vs_recompute(
            dims, trials=args.trials, seed=_resolve_seed(args.seed), tol=tol
        )
        _write_json([block.to_dict() for block in blocks], args.out)
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        tol_kwargs = {}
        if args.tol_rank is not None:
            tol_kwargs["rank_rel_tol"] = args.tol_rank
        if args.tol_angle is not None:
            tol_kwargs["angle_tol"] = args.tol_angle
        tol = ToleranceContext(**tol_kwargs)
        return _dispatch(args, tol)
    except (PreconditionViolated, NotPsd) as exc:
        condition = getattr(exc, "condition", None) or "not_psd"
        print(f"precondition violated [{condition}]: {exc}", file=sys.stderr)
        return 2
    except (MatrixParseError, ShapeMismatchError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
