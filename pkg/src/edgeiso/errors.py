class EdgeIsoError(Exception):
    """Base class for all package errors."""


class InputError(EdgeIsoError, ValueError):
    """Malformed input or violated parameter constraint."""


class CapacityError(EdgeIsoError):
    """Instance exceeds a configured exhaustive-search limit."""
