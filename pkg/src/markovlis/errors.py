"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument fell outside its documented domain."""


class DegenerateChainError(ValueError):
    """Operation needs a + b > 0; at a = b = 0 there is no spectral
    decomposition (both eigenvalues equal 1)."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (formula produced an impossible
    value, or two routes to the same quantity disagreed)."""
