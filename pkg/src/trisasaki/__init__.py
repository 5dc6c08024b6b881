"""Degenerate 3-(α,δ)-Sasakian structures on Lie algebras, checked exactly."""

from importlib import resources

from .contact import (
    AlmostContact3Structure,
    AlmostContactStructure,
    Check,
    NotSasakianError,
    PreconditionError,
    SasakiParams,
    VerificationReport,
    fundamental_form,
    infer_parameters,
    killing_check,
    preconditions,
    reeb_commutators,
    verify_3_compat,
    verify_3ad,
    verify_acms,
    verify_all,
    verify_degenerate,
)
from .constructions import (
    DeformationParams,
    FlatHyperkahler,
    build_isomorphism,
    conjugate,
    flat_boothby_wang,
    h_deformation,
    heisenberg,
    quaternionic_gram_schmidt,
    reconstruct_bracket,
    su2,
    t3,
)
from .forms import AlternatingForm, interior, wedge
from .lie import (
    LieAlgebra,
    ce_differential,
    center,
    is_nilpotent,
    jacobi_check,
    lower_central_series,
    structure_derivations,
)
from .linalg import BackendMismatchError, NonMetricError, Subspace

__version__ = "0.1.0"

__all__ = [
    "AlmostContact3Structure", "AlmostContactStructure", "AlternatingForm",
    "BackendMismatchError", "Check", "DeformationParams", "FlatHyperkahler", "LieAlgebra",
    "NonMetricError", "NotSasakianError", "PreconditionError", "SasakiParams", "Subspace",
    "VerificationReport", "build_isomorphism", "ce_differential", "center", "conjugate",
    "data_path", "flat_boothby_wang", "fundamental_form", "h_deformation", "heisenberg",
    "infer_parameters", "interior", "is_nilpotent", "jacobi_check", "killing_check",
    "lower_central_series", "preconditions", "quaternionic_gram_schmidt",
    "reconstruct_bracket", "reeb_commutators", "structure_derivations", "su2", "t3",
    "verify_3_compat", "verify_3ad", "verify_acms", "verify_all", "verify_degenerate",
    "wedge",
]


def data_path(name: str):
    """Path of a bundled example document, e.g. ``data_path("h1.json")``."""
    return resources.files(__package__) / "data" / name
