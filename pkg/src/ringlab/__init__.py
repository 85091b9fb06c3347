"""Computations with Artinian local algebras: decompositions, resolutions and Poincare series."""
from .linalg import PrimeField, Rationals, parse_field
from .polynomials import Poly, parse_poly
from .algebra import (
    LocalAlgebra,
    IdealSubspace,
    Presentation,
    build_algebra,
    from_inverse_system,
    hilbert_function,
    socle,
    annihilator,
    min_gens,
    is_gorenstein,
    classify_stretch,
    quotient,
    unital_subalgebra,
)

__version__ = "0.1.0"
