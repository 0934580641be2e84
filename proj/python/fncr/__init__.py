"""Faithful-Newton conjugate-residual solvers.

Thin Python surface over the C++ core: problem constructors, the FNCR-LS /
FNCR-reg-LS / NewtonCG / GD solvers with full trace output, spectrum
estimation, and the experiment runner used by the benchmark CLI.
"""

from ._fncr import (
    ConfigError,
    CrossEntropyProblem,
    Dataset,
    Problem,
    QuadraticProblem,
    X0Scheme,
    compute_f_star,
    dataset_checksum,
    estimate_lh,
    estimate_spectrum,
    fncr_ls,
    gd_ls,
    init_x0,
    load_csv,
    load_libsvm,
    make_synthetic,
    newton_cg_ls,
    run_experiment,
)

__all__ = [
    "ConfigError",
    "CrossEntropyProblem",
    "Dataset",
    "Problem",
    "QuadraticProblem",
    "X0Scheme",
    "compute_f_star",
    "dataset_checksum",
    "estimate_lh",
    "estimate_spectrum",
    "fncr_ls",
    "gd_ls",
    "init_x0",
    "load_csv",
    "load_libsvm",
    "make_synthetic",
    "newton_cg_ls",
    "run_experiment",
]
