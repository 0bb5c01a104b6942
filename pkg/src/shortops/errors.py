"""Exception types shared across the package.

The split matters for the CLI: precondition failures (a mathematically
well-posed "no") map to exit code 2, while shape/parse problems map to 3.
"""


class ShapeMismatchError(ValueError):
    """Operands have incompatible dimensions."""


class NumericalKernelError(RuntimeError):
    """A dense decomposition (SVD/eigh) failed to converge."""


class PreconditionViolated(ValueError):
    """A documented mathematical precondition does not hold.

    ``condition`` names the specific failed hypothesis so callers (and the
    CLI) can report which one collapsed.
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class NotComplementary(PreconditionViolated):
    """The two subspaces do not split the space as a direct sum."""


class NotCompatible(PreconditionViolated):
    """No weighted projection exists for the pair (unreachable at finite
    dimension; kept for contract completeness)."""


class RangeNotContained(PreconditionViolated):
    """Right-hand side range is not contained in the left factor's range."""


class NotPsd(ValueError):
    """Matrix has an eigenvalue too negative to be explained by roundoff."""


class BlockNotPsd(NotPsd):
    """An assembled block matrix failed the positive-semidefinite check."""
