"""Numerical toolkit for lacunary and multiplicatively generated integer sets."""

__version__ = "0.1.0"

from .semigroup import (
    InvalidBasisError,
    SemigroupBasis,
    SmoothNumber,
    count_upto,
    enumerate_terms,
    first_terms,
    gap_stats,
    growth_constant,
    iter_terms,
    nth_term,
    ramanujan_approx,
)
from .diophantine import (
    BohrCertificate,
    HighPrecisionReal,
    PrecisionExhausted,
    bohr_certificate,
    continued_fraction,
    irrationality_profile,
    log_ratio,
    pure_pairs,
    rotation_word,
    sturmian_code,
    verify_certificate,
)
from .equidistribution import (
    del_series,
    hartman_profile,
    shrinking_target_sim,
    star_discrepancy,
    weyl_sum,
)
from .random_sets import (
    SelectorProfile,
    SelectorSample,
    bourgain_ratio,
    dilute,
    gap_report,
    growth_report,
    kk_block_analysis,
    relation_bound,
    sample_selector,
)
from .quasi_independence import (
    ExtractionReport,
    SignedRelation,
    build_big_subset,
    case_split_extract,
    dyadic_blocks,
    extract_greedy,
    is_quasi_independent,
    max_quasi_independent_exact,
    mesh_p_bound,
)
from .exp_sums import (
    NormEstimate,
    TrigPolynomial,
    lambda_q_estimate,
    lq_norm,
    psi2_norm,
    psi_block_ratio,
    rider_functional,
)
