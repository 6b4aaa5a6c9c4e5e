"""Edge-isoperimetric problems on graphs and their Cartesian squares."""

__version__ = "0.1.0"

from .errors import CapacityError, EdgeIsoError, InputError
from .graph import Graph

__all__ = ["CapacityError", "EdgeIsoError", "Graph", "InputError", "__version__"]
