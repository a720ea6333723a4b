"""Likelihood-ratio and SPRT analysis over hidden Markov models."""

from ._core import (
    AnalysisError,
    Model,
    are_equivalent,
    brute_force_mortal,
    candidate_exponents,
    det_exponents,
    distinguishability,
    example,
    exponent_profile,
    is_deterministic,
    list_examples,
    loglik_series,
    mortality_gadget,
    prob_e0,
    prob_einf,
    sample_word,
    slope_estimate,
    sprt,
    trace_prob,
    tv_min_mass,
)

__all__ = [
    "AnalysisError",
    "Model",
    "are_equivalent",
    "brute_force_mortal",
    "candidate_exponents",
    "det_exponents",
    "distinguishability",
    "example",
    "exponent_profile",
    "is_deterministic",
    "list_examples",
    "loglik_series",
    "mortality_gadget",
    "prob_e0",
    "prob_einf",
    "sample_word",
    "slope_estimate",
    "sprt",
    "trace_prob",
    "tv_min_mass",
]
