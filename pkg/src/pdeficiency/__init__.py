"""Exact-arithmetic toolkit for p-deficiency of finitely presented groups:
word valuations, presentation parsing, Smith normal form bounds, subgroup
presentations through finite quotients, Fuchsian signature calculus and
Euler-characteristic estimates.
"""

from .abelian import (
    AbelianInvariants,
    IntMatrix,
    SnfResult,
    abelian_invariants,
    abelian_p_deficiency_group,
    abelian_p_deficiency_presentation,
    d_p,
    exponent_matrix,
    nu_p_vector,
    smith_normal_form,
    upper_bound_de,
)
from .fuchsian import (
    DeficiencyResult,
    EllipticAction,
    FuchsianSignature,
    classify,
    de_exact,
    de_standard,
    de_upper,
    kernel_construction,
    parse_signature,
    singerman_transfer,
    standard_presentation,
    volume,
)
from .invariants import (
    ChiEstimate,
    GradientWindow,
    chi_p_estimate,
    gradient_window,
    find_power_witness,
    quotient_dp_drop,
)
from .presentation import (
    FinitePresentation,
    ParseError,
    PresentationError,
    p_deficiency,
    p_prime_root_presentation,
    parse_presentation,
    parse_word,
    power_up,
    word_to_text,
)
from .quotient import (
    CatalogGroup,
    FiniteQuotient,
    GroupCatalog,
    SearchBudget,
    default_catalog,
    enumerate_quotients,
    evaluate,
    is_quotient_of,
    kernel_index,
    order_of_image,
    parse_catalog_manifest,
)
from .rewrite import (
    CosetTable,
    SchreierData,
    SizeBound,
    centralizer_index,
    conjugate_class_reps,
    coset_table,
    p_size_bound,
    rewrite_word,
    schreier,
    subgroup_presentation,
    supermultiplicity_check,
)
from .words import (
    RootDecomposition,
    Valuation,
    Word,
    maximal_root,
    nu_p,
    nu_p_int,
    p_prime_root,
)

__version__ = "0.1.0"
