"""Classification of maps Phi_W(X) = diag(W diag X) - X on 3x3 matrices.

W is a scaled doubly stochastic 3x3 matrix. The package decides complete
positivity, positivity and decomposability of Phi_W where closed-form
criteria apply, certifies the verdicts, and traces the boundary curves of the
admissible region in the (d, e, f) perturbation plane.
"""
from . import errors
from .classify import Classification, classify
from .decomposability import DecomposabilityVerdict, Decomposition, classify_decomposability
from .errors import ConsistencyError, DomainError, DsmapsError, InputError, SingularBoundaryError, SingularityError
from .model import BirkhoffParams, WMatrix, birkhoff_from_w, choi_matrix, parse_w_json, w_from_birkhoff
from .numerics import Tolerance, default_tolerance, eig_sym, real_roots
from .positivity import PositivityVerdict, Tri, classify_positivity
from .region import RegionConfig, RegionCurves, assemble_region

__version__ = "0.1.0"

__all__ = [
    "BirkhoffParams", "Classification", "ConsistencyError", "DecomposabilityVerdict", "Decomposition",
    "DomainError", "DsmapsError", "InputError", "PositivityVerdict", "RegionConfig", "RegionCurves",
    "SingularBoundaryError", "SingularityError", "Tolerance", "Tri", "WMatrix", "assemble_region",
    "birkhoff_from_w", "choi_matrix", "classify", "classify_decomposability", "classify_positivity",
    "default_tolerance", "eig_sym", "errors", "parse_w_json", "real_roots", "w_from_birkhoff",
]
