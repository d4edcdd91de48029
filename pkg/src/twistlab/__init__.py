"""Desk-scale numerics for twisted group algebras: convolution, reduced-norm
bounds, spectral radii, and crossed-product block decompositions."""

__version__ = "0.1.0"

from . import errors  # noqa: F401
from .algebra import AlgebraElement, convolve, delta, involute  # noqa: F401
from .cocycles import Cocycle, TrivialCocycle, validate  # noqa: F401
from .groups import (ExtensionGroup, FiniteTableGroup, FreeGroup,  # noqa: F401
                     Group, IntLattice)
