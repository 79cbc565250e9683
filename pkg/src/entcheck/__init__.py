"""entcheck: decide factorized vs. entangled for tensor-product state
vectors directly from their expansion coefficients, and construct the
local factors when they exist."""

from .bipartite import (
    LocalFactors,
    Outcome,
    PreconditionError,
    Verdict,
    Witness,
    equivalence_scalar,
    extract_local_factors,
    sign_flip_recover,
    sum_test,
    vanishing_sum_test,
)
from .core import CoeffTensor, Tolerances, approx_eq, arg_two_pi, partial_sum, total_sum
from .io import dumps, load_state, loads, save_state
from .multipartite import multiparty_sum_test, reconstruct
from .oracle import (
    SchmidtForm,
    gen_product_state,
    gen_random_state,
    numeric_rank,
    oracle_factorized,
    schmidt,
    unfold,
)
from .phase import PhaseSolution, circular_distance, magnitude_phase_test, phase_constant, solve_phases
from .pipeline import AnalysisReport, analyze, normalize_factors, render_report

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "CoeffTensor",
    "LocalFactors",
    "Outcome",
    "PhaseSolution",
    "PreconditionError",
    "SchmidtForm",
    "Tolerances",
    "Verdict",
    "Witness",
    "analyze",
    "approx_eq",
    "arg_two_pi",
    "circular_distance",
    "dumps",
    "equivalence_scalar",
    "extract_local_factors",
    "gen_product_state",
    "gen_random_state",
    "load_state",
    "loads",
    "magnitude_phase_test",
    "multiparty_sum_test",
    "normalize_factors",
    "numeric_rank",
    "oracle_factorized",
    "partial_sum",
    "phase_constant",
    "reconstruct",
    "render_report",
    "save_state",
    "schmidt",
    "sign_flip_recover",
    "solve_phases",
    "sum_test",
    "total_sum",
    "unfold",
    "vanishing_sum_test",
]
