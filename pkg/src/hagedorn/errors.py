"""Exception types shared across the package."""


class HagedornError(Exception):
    """Base class for every package-specific error."""


class DimensionMismatch(HagedornError):
    pass


class NotIsotropic(HagedornError):
    """Frame matrix fails Z^T Omega Z = 0."""

    def __init__(self, residual):
        super().__init__(f"isotropy residual {residual:.3e} exceeds tolerance")
        self.residual = float(residual)


class NotNormalised(HagedornError):
    """Frame matrix fails (i/2) Z^* Omega Z = Id."""

    def __init__(self, residual):
        super().__init__(f"normalisation residual {residual:.3e} exceeds tolerance")
        self.residual = float(residual)


class Singular(HagedornError):
    """Matrix inversion refused, condition number above the safe bound."""

    def __init__(self, name, cond):
        super().__init__(f"{name} has condition number {cond:.3e}, refusing to invert")
        self.cond = float(cond)


class SymmetryViolation(HagedornError):
    """Derived recursion matrix came out asymmetric beyond tolerance."""

    def __init__(self, residual):
        super().__init__(f"recursion matrix asymmetry {residual:.3e} exceeds tolerance")
        self.residual = float(residual)


class AsymmetricM(HagedornError):
    """Polynomial engine given a non-symmetric parameter matrix."""


class AxisOutOfRange(HagedornError, IndexError):
    pass


class ZeroOffdiagonal(HagedornError):
    """Laguerre reduction requested on a vanishing off-diagonal entry."""


class RequiresEqualFrames(HagedornError):
    """Operation only defined when both packets share one frame."""


class QuadratureUnderResolved(HagedornError):
    """The requested quadrature cannot deliver the target accuracy.

    Raised either when the estimated Gaussian mass outside the box exceeds
    the tail tolerance, or when the node count cannot resolve the
    integrand's oscillations inside the box.
    """

    def __init__(self, estimate, tolerance, reason="tail"):
        if reason == "nodes":
            msg = (
                f"{estimate:.0f} nodes per axis needed to resolve the integrand, "
                f"got {tolerance:.0f}; raise nodes_per_axis or shrink the box"
            )
        else:
            msg = (
                f"quadrature tail estimate {estimate:.3e} exceeds tolerance "
                f"{tolerance:.3e}; enlarge the box or the node count"
            )
        super().__init__(msg)
        self.estimate = float(estimate)
        self.tolerance = float(tolerance)
        self.reason = reason


class GridTooLarge(HagedornError):
    def __init__(self, total, limit):
        super().__init__(f"grid with {total} nodes exceeds the limit of {limit}")
        self.total = int(total)
        self.limit = int(limit)


class LiftInvariantViolation(HagedornError):
    """Doubled-dimension frame failed one of its structural identities."""

    def __init__(self, part, residual):
        super().__init__(f"lift invariant '{part}' violated, residual {residual:.3e}")
        self.part = part
        self.residual = float(residual)
