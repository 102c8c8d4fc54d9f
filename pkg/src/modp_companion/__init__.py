"""Mod-p q-expansion arithmetic and a certifying implementation of the
companion-form construction of weight-one forms."""

from .ffield import FieldDescriptor, FqElem, make_field
from .qseries import QQ, QExpansion, op_B, op_theta, op_U, op_V, sturm_bound
from .characters import DirichletChar, kronecker_character
from .spaces import (
    ModForm,
    SpaceBasis,
    dimension,
    eigen_decomposition,
    eigenforms,
    eisenstein,
    hasse_invariant,
    hecke_matrix,
    space_basis,
)
from .eigensystems import (
    CompanionFamily,
    EigenSystem,
    IdealMonoid,
    classical_monoid,
    companion_family,
    synthetic_family,
    synthetic_monoid,
)
from .companion import (
    CompanionCertificate,
    build_f_g,
    classical_companion,
    compare_to_target,
    deplete,
    extract_weight_one,
    gamma_product,
    verify_lemma,
    verify_v_identity,
)

__version__ = "0.1.0"

__all__ = [
    "FieldDescriptor", "FqElem", "make_field",
    "QQ", "QExpansion", "op_B", "op_theta", "op_U", "op_V", "sturm_bound",
    "DirichletChar", "kronecker_character",
    "ModForm", "SpaceBasis", "dimension", "eigen_decomposition", "eigenforms", "eisenstein",
    "hasse_invariant", "hecke_matrix", "space_basis",
    "CompanionFamily", "EigenSystem", "IdealMonoid", "classical_monoid", "companion_family",
    "synthetic_family", "synthetic_monoid",
    "CompanionCertificate", "build_f_g", "classical_companion", "compare_to_target", "deplete",
    "extract_weight_one", "gamma_product", "verify_lemma", "verify_v_identity",
    "__version__",
]
