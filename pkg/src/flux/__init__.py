"""Exact computer algebra for the two-vertex quiver algebra Q, its
A-infinity deformations Q_p, twisted complexes over them, theta series on
the Novikov field and polygon counts on the two-torus."""

from .errors import FluxError
from .linalg import BACKEND
from .novikov import LaurentNovikov, NovikovScalar

__version__ = "0.1.0"

__all__ = ["BACKEND", "FluxError", "LaurentNovikov", "NovikovScalar", "__version__"]
