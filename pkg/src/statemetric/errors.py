class InputError(ValueError):
    """Malformed or inconsistent input."""


class ConstructionError(ValueError):
    """Data that cannot define the requested object (non-faithful rep, bad metric, ...)."""


class KernelError(ValueError):
    """The seminorm vanishes on non-scalar elements, so the metric is not defined on all states."""


class InfeasibleError(RuntimeError):
    """Linear program has no feasible point."""
