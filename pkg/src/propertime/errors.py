"""Exception types shared across the library."""


class PropertimeError(Exception):
    """Base class for all library-specific failures."""


class DomainError(PropertimeError, ValueError):
    """Input outside the mathematical domain of an operation."""


class RetardationError(PropertimeError):
    """No retarded solution exists on the supplied trajectory interval."""


class DegenerateGeometryError(PropertimeError):
    """Field point coincides with the source point."""


class SingularGeometryError(PropertimeError):
    """Retardation geometry with non-positive separation scale s."""


class RenormalizationPoleError(PropertimeError, ZeroDivisionError):
    """V = -H0: the interaction-renormalized mass diverges."""


class SpacelikeSystemError(PropertimeError, ValueError):
    """Total four-momentum is spacelike: H^2 < c^2 P^2."""


class ResolutionError(PropertimeError, ValueError):
    """Grid spacing too coarse to resolve the kernel's Compton scale."""


class IntegrationAbort(PropertimeError, RuntimeError):
    """Orbit integration hit a pole or overflow at a known step."""

    def __init__(self, step: int, message: str):
        self.step = step
        super().__init__(f"step {step}: {message}")
