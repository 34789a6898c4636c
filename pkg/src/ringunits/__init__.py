"""Exact group-ring arithmetic around the nontrivial-unit constructions.

The library verifies the characteristic-zero unit over R[P] and its
specializations, rebuilds the bilinear search systems with their
symmetries and reductions, analyses support-product combinatorics, and
re-finds the characteristic-2 unit by exhaustive search.
"""

from .bilinear import (
    BilinearSystem,
    CharacterPair,
    FormatConstraintError,
    Polynomial,
    add_normalization,
    apply_variable_permutation,
    check_parity,
    check_swap_symmetries,
    enumerate_character_pairs,
    export_system,
    generate_bilinear_system,
    localize,
    reduce_by_characters,
    reduce_system_mod,
    remark_character_pair,
    substitute,
)
from .catalog import (
    ALPHA_TERMS,
    BETA_TERMS,
    NU_WORDS,
    SupportPair,
    catalog_support_pair,
    coefficient_conjugation_twist,
    make_alpha,
    make_beta,
    make_nu,
    make_nu_partner,
    phi_S,
    rho_grading,
    specialize_catalog_pair,
    specialize_catalog_pair_zeta8,
    theta0,
    theta1,
)
from .groupring import (
    CoeffRing,
    F2_RING,
    GAUSSIAN_RING,
    GroupCharacter,
    GroupRingElem,
    MissingWitnessError,
    R_RING,
    SignedCharacter,
    TwistedAutomorphism,
    ZETA8_RING,
    abelianize_is_one,
    abelianize_table,
    check_rho_grading,
    gf_ring,
    group_by_name,
    is_nontrivial,
    verify_unit,
)
from .groups import (
    AffineGroup,
    DecompositionError,
    GroupElement,
    GroupError,
    PDecomposition,
    UnknownGeneratorError,
    Word,
    WordSyntaxError,
    abelianize_P,
    apply_generator_map,
    canonical_word_P,
    check_relators,
    decompose_P,
    eval_word,
    extend_generator_map,
    make_group_P,
    make_group_S,
    parse_word,
    recompose_P,
)
from .products import (
    CnfFormula,
    F2Family,
    F2SearchResult,
    MultiplicityTable,
    ResourceBoundError,
    SubpairVerdict,
    encode_two_unique_product_cnf,
    exhaustive_subpair_check,
    has_unique_product,
    multiplicity_table,
    search_units_f2,
    solve_cnf_naive,
)
from .rings import (
    CycloBivariate,
    EighthRootError,
    FieldDesc,
    GaussianInt,
    PrimeField,
    QuadExtField,
    RingMismatchError,
    Zeta8,
    cyclo_monomial,
    find_eighth_root,
    gaussian_to_cyclo,
    is_prime,
    specialize_R,
)

__version__ = "1.0.0"
