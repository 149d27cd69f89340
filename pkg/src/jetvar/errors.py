"""Exception hierarchy used across the package."""


class JetvarError(Exception):
    """Base class for every error raised by this package."""


class DivisionByNonInvertible(JetvarError):
    """Raised when an exact division needs a denominator that was never
    declared invertible."""

    def __init__(self, text: str):
        super().__init__(f"cannot divide by '{text}': not declared invertible")
        self.text = text


class ContextMismatch(JetvarError):
    """Operands live over different bundles or equation manifolds."""


class MaxOrderExceeded(JetvarError):
    """A derivation tried to build a jet coordinate above the order cap."""

    def __init__(self, order: int, limit: int):
        super().__init__(
            f"jet order {order} exceeds the cap {limit}; "
            "raise JETVAR_MAX_ORDER to allow deeper prolongations"
        )
        self.order = order
        self.limit = limit


class NotHorizontal(JetvarError):
    """The horizontal differential was applied to a form with contact part."""


class InconsistentSystem(JetvarError):
    """Cross prolongations of the solved relations disagree."""


class InconsistentCovering(InconsistentSystem):
    """The covering relations contradict the system they extend."""


class NotSolved(JetvarError):
    """The relations are not in solved form (cyclic or ill-founded)."""


class EulerNotVanishing(JetvarError):
    """The density is not stationary on the equation manifold."""


class NotASymmetry(JetvarError):
    """The supplied characteristic does not preserve the equations."""


class NotASymmetryWarning(UserWarning):
    """Advisory counterpart of NotASymmetry for exploratory calls."""


class NotSolvable(JetvarError):
    """The section conditions cannot be solved for the requested data."""


class UnderDetermined(JetvarError):
    """Some internal coordinates are not reached by the section conditions."""

    def __init__(self, coords):
        names = ", ".join(str(c) for c in coords)
        super().__init__(f"no condition determines: {names}; supply free data")
        self.coords = tuple(coords)


class OverDetermined(JetvarError):
    """The section conditions impose nonzero constraints on the free data."""

    def __init__(self, residuals):
        shown = "; ".join(str(r) for r in residuals)
        super().__init__(f"free data is constrained by: {shown}")
        self.residuals = tuple(residuals)


class NondegeneracyFailure(JetvarError):
    """The coefficient matrix of the top derivatives is not invertible."""


class ShapeMismatch(JetvarError):
    """Operator shapes are incompatible for the requested composition."""
