"""Exact Leibniz cohomology and versal deformations of Leibniz algebras."""
from __future__ import annotations

__version__ = "0.1.0"

from .deformation import (
    DefectVerdict,
    Deformation,
    DifferentialMap,
    ObstructionClass,
    alpha_cochain,
    check_deformation,
    differential,
    equivalent_infinitesimal,
    leibniz_defect,
    obstruction,
    push_out,
    universal_infinitesimal,
)
from .exact_linalg import Subspace, nullspace, quotient_basis, rank, rref, solve
from .fileformat import ParseError, load_algebra, parse_algebra, serialize_algebra
from .leibniz import (
    Cochain,
    CohomologyData,
    LeibnizAlgebra,
    NotLeibnizError,
    Representation,
    adjoint,
    coboundary,
    coboundary_matrix,
    cohomology,
    is_cocycle,
    solve_coboundary,
    trivial_representation,
    verify_leibniz,
    verify_representation,
)
from .local_algebra import (
    AlgebraMap,
    ExtensionDatum,
    TruncatedLocalAlgebra,
    UniversalExtension,
    ground_field,
    harrison_cohomology_bruteforce,
    harrison_h2_presented,
    one_dim_extensions,
    tangent_space_dim,
    universal_extension,
)
from .versal import VersalResult, compare_pushout, push_down, verify_versal, versal_truncation

__all__ = [
    "__version__",
    "AlgebraMap",
    "Cochain",
    "CohomologyData",
    "DefectVerdict",
    "Deformation",
    "DifferentialMap",
    "ExtensionDatum",
    "LeibnizAlgebra",
    "NotLeibnizError",
    "ObstructionClass",
    "ParseError",
    "Representation",
    "Subspace",
    "TruncatedLocalAlgebra",
    "UniversalExtension",
    "VersalResult",
    "adjoint",
    "alpha_cochain",
    "check_deformation",
    "coboundary",
    "coboundary_matrix",
    "cohomology",
    "compare_pushout",
    "differential",
    "equivalent_infinitesimal",
    "ground_field",
    "harrison_cohomology_bruteforce",
    "harrison_h2_presented",
    "is_cocycle",
    "leibniz_defect",
    "load_algebra",
    "nullspace",
    "obstruction",
    "one_dim_extensions",
    "parse_algebra",
    "push_down",
    "push_out",
    "quotient_basis",
    "rank",
    "rref",
    "serialize_algebra",
    "solve",
    "solve_coboundary",
    "tangent_space_dim",
    "trivial_representation",
    "universal_extension",
    "universal_infinitesimal",
    "verify_leibniz",
    "verify_representation",
    "verify_versal",
    "versal_truncation",
]
