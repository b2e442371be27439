class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size cap."""


class IntegrityError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
