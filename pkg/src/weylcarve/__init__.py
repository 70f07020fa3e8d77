"""Exact carving of irreducible representations out of exterior powers of the
standard representation of unitary and symplectic similitude groups.
"""

from .carve import CarveReport, SiegelReport, carve_siegel_checks, carve_unitary, galois_q_form, t_of
from .errors import CarveError, OracleMismatch, PreconditionError
from .exactnum import QuadElem, Splitting, padic_val, splitting_type
from .weights import Case, Weight, dual_weight, is_p_small, weyl_dim

__all__ = [
    "CarveError", "CarveReport", "Case", "OracleMismatch", "PreconditionError", "QuadElem",
    "SiegelReport", "Splitting", "Weight", "carve_siegel_checks", "carve_unitary",
    "dual_weight", "galois_q_form", "is_p_small", "padic_val", "splitting_type", "t_of",
    "weyl_dim",
]

__version__ = "0.1.0"
