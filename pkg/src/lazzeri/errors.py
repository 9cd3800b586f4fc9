"""Exception types shared across the package."""


class LazzeriError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentsError(LazzeriError, ValueError):
    """Input violates a documented precondition."""


class UnsupportedError(LazzeriError):
    """The request is well formed but outside the supported regime."""


class DegenerateFrameError(LazzeriError):
    """A frame that should define a period point broke down numerically."""


class NumericalBreakdownError(LazzeriError):
    """A solve that cannot fail on exact inputs failed; tolerances are suspect."""


class NotAnExtensionError(LazzeriError):
    """The candidate metric does not extend the singular one."""


class AdaptedBasisError(LazzeriError):
    """An integral symplectic basis completion failed (pairing not unimodular)."""
