"""Kernel conditional moment specification tests.

Thin wrapper over the compiled extension. The main entry points are the three
tests (:func:`kcm_test`, :func:`icm_test`, :func:`smooth_test`), the MMR
statistics, MMMR estimation, instrumental-variable regression, and the
Monte-Carlo harness (:func:`run_power`, :func:`run_type1`).
"""

from ._kcm import (
    CellResult,
    Dataset,
    DegenerateDataError,
    ExperimentConfig,
    IllPosedError,
    InputError,
    IVSolution,
    KernelSpec,
    RegularizationError,
    ResidualModel,
    TestOutcome,
    __version__,
    cmme_eval,
    cmmd_v,
    eval_kernel,
    gen_reg,
    gen_simeq,
    gram,
    h_matrix,
    icm_stat,
    icm_test,
    imq_kernel,
    kcm_test,
    laplacian_kernel,
    linear_kernel,
    median_heuristic,
    mercer_finite_check,
    mmmr_fit,
    mmmr_fit_numeric,
    mmmr_objective,
    mmr_iv_solve,
    mmr_u,
    mmr_v,
    perturb_theta,
    polynomial_kernel,
    rbf_kernel,
    reg_true_theta,
    residuals,
    results_csv,
    run_power,
    run_type1,
    simeq_true_theta,
    smooth_stat,
    smooth_test,
    spectral_mmr_estimate,
)

__all__ = [
    "CellResult",
    "Dataset",
    "DegenerateDataError",
    "ExperimentConfig",
    "IllPosedError",
    "InputError",
    "IVSolution",
    "KernelSpec",
    "RegularizationError",
    "ResidualModel",
    "TestOutcome",
    "__version__",
    "cmme_eval",
    "cmmd_v",
    "eval_kernel",
    "gen_reg",
    "gen_simeq",
    "gram",
    "h_matrix",
    "icm_stat",
    "icm_test",
    "imq_kernel",
    "kcm_test",
    "laplacian_kernel",
    "linear_kernel",
    "median_heuristic",
    "mercer_finite_check",
    "mmmr_fit",
    "mmmr_fit_numeric",
    "mmmr_objective",
    "mmr_iv_solve",
    "mmr_u",
    "mmr_v",
    "perturb_theta",
    "polynomial_kernel",
    "rbf_kernel",
    "reg_true_theta",
    "residuals",
    "results_csv",
    "run_power",
    "run_type1",
    "simeq_true_theta",
    "smooth_stat",
    "smooth_test",
    "spectral_mmr_estimate",
]
