"""Exception hierarchy shared by every evaluator in the package."""


class HypergeometricError(ValueError):
    """Base class for all evaluation failures."""


class ParameterError(HypergeometricError):
    """A denominator parameter sits on (or within 1e-10 of) a nonpositive integer."""


class PoleError(HypergeometricError):
    """Gamma-function pole or a divergent Gauss sum at unit argument."""


class DivergenceError(HypergeometricError):
    """Argument outside the convergence domain of the requested series."""


class ConvergenceError(HypergeometricError):
    """Tail criterion not met within the term or evaluation budget."""


class DomainError(HypergeometricError):
    """Stated domain conditions of an identity or integral are violated."""


class SingularConfigurationError(HypergeometricError):
    """A continuation formula hits a vanishing denominator (h=k, h=k', h=k+k')."""


class NoStrategyError(HypergeometricError):
    """f2_eval found no evaluation strategy for the parameter tuple."""

    def __init__(self, message, attempts=()):
        super().__init__(message)
        self.attempts = list(attempts)
