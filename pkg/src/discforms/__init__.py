"""Exact arithmetic for discriminant forms and vector-valued modular forms.

Subpackages:
    cyclo    exact roots of unity and Gauss sums
    fqm      finite quadratic modules and their subgroup lattice
    weil     the Weil representation on the group algebra
    qseries  vector-valued q-expansions and oldform decompositions
    lattice  even lattices, hyperbolic splittings, Eichler maps
    lifts    scalar-to-vector lifts at prime level
    dims     dimension formulas and the Picard rank table
    specfun  incomplete gamma and the associated special integral
"""

from .errors import ConsistencyError, PreconditionError, SearchExhausted

__all__ = ["ConsistencyError", "PreconditionError", "SearchExhausted"]
__version__ = "0.1.0"
