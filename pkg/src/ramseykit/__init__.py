"""Finite model-theoretic combinatorics on ordered, locally finite structures.

Quantifier-free types and isolating formulas, closure operators, tree
truncations and skew embeddings, Ramsey arrow checking with witness
verification, amalgamation search, and coloring homogenization.
"""

from .amalgam import AmalgamRecord, check_amalgamation, kt_membership
from .closure import Copy, cl, closure_set, generated_substructure
from .core import (
    FiniteStructure,
    Signature,
    Violation,
    induced_substructure,
    parse_structure,
    serialize_structure,
    validate,
)
from .empatterns import (
    EmPattern,
    IndexedFamily,
    IndiscernibilityReport,
    em_pattern,
    identity_family,
    ind_fragment,
    constraints_satisfied,
    is_indiscernible,
    locally_based_check,
)
from .fill import FillResult, expand_to_Ls, extract_S, fill_m, in_Kmu, with_level_bound
from .formulas import (
    QfFormula,
    eval_formula,
    eval_formula_over,
    parse_formula,
    parse_formula_list,
    serialize_formula,
)
from .homogenize import (
    HomogenizationRequest,
    HomogenizationResult,
    encode_coloring_as_structure,
    homogenize,
    roundtrip_check,
    sigma_eta,
)
from .iso import (
    Embedding,
    age_up_to,
    canonical_form,
    canonical_key,
    enumerate_copies,
    enumerate_embeddings,
    find_isomorphism,
    is_embedding,
)
from .qftypes import DeltaType, QfType, delta_type, isolating_formula, qf_type, realized_types
from .ramsey import (
    ArrowVerdict,
    Coloring,
    arrow_holds,
    arrow_oracle,
    find_homogeneous,
    ramsey_homogeneous_levels,
)
from .skew import SkewEmbedding, skew_embed
from .trees import TreeStructure, build_tree, lex_cmp, level, meet, parse_tree_shorthand, tree_structure

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
