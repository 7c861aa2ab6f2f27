"""Periodic complexes and differential modules over finite-dimensional monomial path algebras."""
from .exactlin import GF, QQ, field_from_spec
from .quiver import AlgebraError, NotFiniteDimensional, PathAlgebra, build_algebra
from .proj import ProjMap, ProjModule
from .boundedcx import BoundedComplex, ChainMap, hom_kb, minimize_bounded
from .periodic import (
    PeriodicComplex,
    PeriodicMap,
    hom_kn,
    indecomposable_kn,
    iso_cn,
    make_periodic,
    minimize_periodic,
)
from .compress import compress, orbit_hom_check

__version__ = "0.1.0"
