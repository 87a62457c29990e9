"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A configuration object violates one of its invariants."""


class NonPositiveTxPower(ParameterError):
    """Cache power consumption exhausts the BS power budget."""


class IndexOutOfLibrary(IndexError):
    """File index outside the library range [1, F]."""


class NegativeDistance(ValueError):
    """A link distance below zero was supplied."""


class ZeroDistance(ValueError):
    """Path loss is undefined at zero distance."""


class QuadratureFailure(RuntimeError):
    """An adaptive quadrature did not converge to the requested tolerance."""


class RejectionStarvation(RuntimeError):
    """Rejection sampler acceptance rate fell below the viability floor."""


class ConfigError(ValueError):
    """A run configuration file failed to parse or validate."""
