"""Chow rings of matroids: straightening, degree maps and Poincare duality checks."""
from .errors import ChowError
from .lattice import MeetSemilattice, Poset, as_meet_semilattice, build_poset, chain_f_vector, covers
from .matroid import (
    MatroidLattice,
    boolean_matroid,
    contraction,
    graphic_matroid,
    rank_zero_matroid,
    restriction,
    truncation,
    uniform_matroid,
    validate_matroid,
)
from .polynomial import Monomial, Polynomial, format_polynomial, parse_polynomial
from .ring import (
    AUGMENTED,
    REDUCED,
    SEMILATTICE,
    RingContext,
    enumerate_standard_monomials,
    hilbert_series,
    multiply,
    series_truncated,
    straighten,
)

__version__ = "0.1.0"
