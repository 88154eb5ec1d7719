"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operands have incompatible Hilbert-space dimensions."""


class NonHermitianError(ValueError):
    """A matrix expected to be Hermitian is not."""

    def __init__(self, asymmetry: float):
        self.asymmetry = asymmetry
        super().__init__(f"matrix is not Hermitian (max |H - H^dagger| = {asymmetry:.3e})")


class GridError(ValueError):
    """A time grid is malformed or too coarse to follow the state."""


class PhysicsError(ValueError):
    """Base class for inputs that are well-formed but physically unusable."""


class OpenCurveError(PhysicsError):
    """The evolution did not return to its initial state."""

    def __init__(self, defect: float, tol: float):
        self.defect = defect
        self.tol = tol
        super().__init__(f"curve is not closed: defect {defect:.3e} exceeds tolerance {tol:.1e}")


class StationaryStateError(PhysicsError):
    """The state does not move (it occupies a single energy level)."""

    def __init__(self, message: str = "stationary"):
        super().__init__(message)
