"""Fock-basis matrix elements of multimode Gaussian operators.

The package has four layers: ``bogoliubov`` (transforms and factorizations),
``hermite`` (polynomial/moment engines), ``husimi`` (generating functions and
element evaluation) and ``oracle`` (truncated-Fock brute force for
verification), plus a command-line front end in ``cli``.
"""

from ._backend import BACKEND
from .bogoliubov import (
    BlochMessiah,
    BogoliubovTransform,
    Displacement,
    Rotation,
    Squeezing,
    SymplecticReport,
    bloch_messiah,
    compose,
    from_elementary,
    haar_unitary,
    ops_from_dict,
    ops_to_dict,
    random_transform,
    takagi,
    transform_from_dict,
    transform_from_json,
    transform_to_dict,
    transform_to_json,
    validate_symplectic,
)
from .exceptions import (
    BogofockError,
    InvalidTransformError,
    ResourceLimitError,
    ShapeError,
    TruncationRiskError,
)
from .hermite import (
    GaussianMomentParams,
    HermiteParams,
    MultiIndex,
    mgm_direct,
    mgm_to_mhp,
    mhp_direct,
    mhp_lattice,
    mhp_recursion,
    mhp_to_mgm,
)
from .husimi import (
    HusimiGaussian,
    QuadratureHusimi,
    WMatrix,
    element_block,
    gaussian_qfunction,
    heuristic_cutoffs,
    matrix_element,
    quadrature_element,
    quadrature_qfunction,
    w_matrix,
)
from .oracle import (
    TruncatedOperator,
    elementary_matrix,
    ladder_matrices,
    oracle_element,
    oracle_quadrature_element,
    quadrature_matrices,
    transform_matrix,
    unitarity_leakage,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlochMessiah",
    "BogofockError",
    "BogoliubovTransform",
    "Displacement",
    "GaussianMomentParams",
    "HermiteParams",
    "HusimiGaussian",
    "InvalidTransformError",
    "MultiIndex",
    "QuadratureHusimi",
    "ResourceLimitError",
    "Rotation",
    "ShapeError",
    "Squeezing",
    "SymplecticReport",
    "TruncatedOperator",
    "TruncationRiskError",
    "WMatrix",
    "bloch_messiah",
    "compose",
    "element_block",
    "elementary_matrix",
    "from_elementary",
    "gaussian_qfunction",
    "haar_unitary",
    "heuristic_cutoffs",
    "ladder_matrices",
    "matrix_element",
    "mgm_direct",
    "mgm_to_mhp",
    "mhp_direct",
    "mhp_lattice",
    "mhp_recursion",
    "mhp_to_mgm",
    "ops_from_dict",
    "ops_to_dict",
    "oracle_element",
    "oracle_quadrature_element",
    "quadrature_element",
    "quadrature_matrices",
    "quadrature_qfunction",
    "random_transform",
    "takagi",
    "transform_from_dict",
    "transform_from_json",
    "transform_matrix",
    "transform_to_dict",
    "transform_to_json",
    "unitarity_leakage",
    "validate_symplectic",
    "w_matrix",
]
