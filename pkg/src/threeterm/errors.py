"""Exception and warning types shared across the package."""


class NonConvergence(ArithmeticError):
    """An iterative solver ran out of iterations."""


class RealnessViolation(ArithmeticError):
    """h(theta) came out with a non-negligible imaginary part."""


class DegenerateLeading(ValueError):
    """A(z) vanishes, so the denominator drops below degree n."""


class DegenerateEquation(ValueError):
    """The z-equation for a given theta is identically zero."""


class SignMismatch(UserWarning):
    """Observed sign of h on the grid differs from the predicted one."""
