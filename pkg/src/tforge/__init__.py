"""Exact GF(p) Terwilliger-algebra toolkit for group triple schemes."""
from __future__ import annotations

from .gfp_linalg import (
    GFMatrix,
    PrimeModulus,
    Scalar,
    SubspaceBasis,
    contains,
    mat_mul,
    nilpotency_index,
    rref_extend,
    transpose,
)
from .scheme import (
    GroupSpec,
    SchemeDescriptor,
    TripleSpace,
    build_descriptor,
    build_triple_space,
    check_scheme_axioms,
    intersection_brute,
    intersection_closed,
    is_elementary_abelian_2,
    load_cayley_table,
    valencies_closed,
    valency,
)
from .talgebra import (
    AlgExpr,
    AlgebraHandle,
    Coeff,
    TerwilligerContext,
    UnsupportedCaseError,
    adjacency_matrix,
    closure_generate,
    corner_subalgebra,
    dual_idempotent,
    make_context,
    paper_basis,
    t0_basis,
    triple_product,
)
from .structure import (
    CaseLabel,
    certify_radical,
    classify_case,
    decompose,
    expected_block_sizes,
    matrix_unit_scheme,
    radical_candidate,
    semisimple_closed_form,
)
from .verify import (
    identity_registry,
    predicate_registry,
    registry_manifest,
    run_identities,
    run_predicates,
    transpose_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "GFMatrix",
    "PrimeModulus",
    "Scalar",
    "SubspaceBasis",
    "contains",
    "mat_mul",
    "nilpotency_index",
    "rref_extend",
    "transpose",
    "GroupSpec",
    "SchemeDescriptor",
    "TripleSpace",
    "build_descriptor",
    "build_triple_space",
    "check_scheme_axioms",
    "intersection_brute",
    "intersection_closed",
    "is_elementary_abelian_2",
    "load_cayley_table",
    "valencies_closed",
    "valency",
    "AlgExpr",
    "AlgebraHandle",
    "Coeff",
    "TerwilligerContext",
    "UnsupportedCaseError",
    "adjacency_matrix",
    "closure_generate",
    "corner_subalgebra",
    "dual_idempotent",
    "make_context",
    "paper_basis",
    "t0_basis",
    "triple_product",
    "CaseLabel",
    "certify_radical",
    "classify_case",
    "decompose",
    "expected_block_sizes",
    "matrix_unit_scheme",
    "radical_candidate",
    "semisimple_closed_form",
    "identity_registry",
    "predicate_registry",
    "registry_manifest",
    "run_identities",
    "run_predicates",
    "transpose_pairs",
]
