"""Classification and rectification of hypersurfaces f(x,y)u + g(x,y,z) = 0 in C^4."""
from .poly import Polynomial, parse, Tri, WeightValue

__version__ = "0.1.0"
__all__ = ["Polynomial", "parse", "Tri", "WeightValue", "__version__"]
