"""Exception and warning types shared across the package."""


class GaussDivError(Exception):
    """Base class for every error raised by this package."""


class NonFinite(GaussDivError):
    """Input contains NaN or infinite entries."""


class DimMismatch(GaussDivError):
    """Operands live on spaces of different dimension."""


class EigFailure(GaussDivError):
    """An eigendecomposition failed to converge or returned garbage."""


class NotShifted(GaussDivError):
    """The scalar shift is zero or negative where a positive one is required."""


class NotPositive(GaussDivError):
    """An operator required to be positive definite is not."""


class NotPSD(GaussDivError):
    """A matrix required to be positive semidefinite has a genuinely negative eigenvalue."""


class Degenerate(GaussDivError):
    """A covariance required to be strictly positive definite has (numerically) a kernel."""


class SingularPair(GaussDivError):
    """The two Gaussian measures are mutually singular.

    Under the equivalent-or-singular dichotomy the exact KL, Renyi and
    Bhattacharyya divergences are +inf and the Radon-Nikodym derivative does
    not exist; this exception is that outcome, not a numerical fault.
    """


class IllConditioned(RuntimeWarning):
    """Base covariance condition number exceeds 1e12; whitening is unreliable."""
