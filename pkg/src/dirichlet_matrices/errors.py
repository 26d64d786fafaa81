"""Exception types shared across the package."""


class InputError(ValueError):
    """Arguments violate a documented precondition."""


class CapExceededError(InputError):
    """Requested size is above the cap of a brute-force routine."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to certify its result."""


class SpectrumStructureError(RuntimeError):
    """A spectrum does not have the expected pair of large real eigenvalues."""
