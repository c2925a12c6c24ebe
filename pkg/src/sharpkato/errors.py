"""Exception types raised across the package."""


class DomainError(ValueError):
    """Arguments outside the range where a formula is defined."""


class DegenerateGradientOfNorm(ArithmeticError):
    """|grad |grad u|| vanishes, so the Kato ratio is undefined."""


class DegenerateGradient(ArithmeticError):
    """grad u vanishes at the point; the p-harmonic equation degenerates."""


class ConstantExponent(DomainError):
    """p == n makes |x|^((p-n)/(p-1)) constant."""


class NoFeasibleN(ArithmeticError):
    """The regularity gates already fail at n = 3."""


class SamplingError(RuntimeError):
    """Rejection sampling exhausted its draw budget."""
