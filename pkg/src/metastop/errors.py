"""Exception hierarchy shared across the package."""


class MetastopError(Exception):
    """Base class for all errors raised by this package."""


class GenerationFailed(MetastopError):
    """Workspace sampling exhausted its rejection budget."""


class ResolutionTooCoarse(MetastopError):
    """Occupancy grid too coarse to separate start and goal cells."""


class InvalidStart(MetastopError):
    """Planner initialised with a colliding start or goal pose."""


class NoSolutionFound(MetastopError):
    """Planner exhausted its iteration budget without a feasible path."""


class DegenerateProfile(MetastopError):
    """Profile whose first feasible length does not exceed the optimum."""


class ShapeMismatch(MetastopError):
    """Tensor shape incompatible with the layer it was fed to."""


class Diverged(MetastopError):
    """Training loss became non-finite."""


class EmptyDataset(MetastopError):
    """Fit called with no training data."""


class InsufficientData(MetastopError):
    """Too few samples to compute the requested statistic."""


class MissingInput(MetastopError):
    """A normalizer was queried without the input its kind requires."""


class StateOutOfRange(MetastopError):
    """Policy queried with a malformed or out-of-range history."""
