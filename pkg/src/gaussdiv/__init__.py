"""Log-determinant divergences between Gaussian measures.

The package treats a covariance as a symmetric trace-class block plus a
positive multiple of the identity.  On that representation the extended
trace and extended Fredholm determinant have exact finite expressions,
which makes the alpha log-determinant divergence, its Kullback-Leibler,
Renyi, Bhattacharyya and Hellinger specializations, and the trace-class
Radon-Nikodym log-density all computable without truncation error.
"""

from .errors import (
    Degenerate,
    DimMismatch,
    EigFailure,
    GaussDivError,
    IllConditioned,
    NonFinite,
    NotPSD,
    NotPositive,
    NotShifted,
    SingularPair,
)
from .operators import (
    DEFAULT_TOL,
    ShiftedOperator,
    Spectrum,
    ToleranceConfig,
    TraceClassBlock,
    carleman_logdet2,
    ext_fredholm_logdet,
    ext_trace,
    psd_inv_sqrt,
    psd_sqrt,
    shifted_combine,
    shifted_identity,
    shifted_inv,
    shifted_mul,
    sym_eigen,
)
from .logdet import (
    ENDPOINT_MARGIN,
    LogDetPath,
    LogDetResult,
    alpha_logdet,
    alpha_logdet_dual_check,
)
from .gaussian import (
    CONDITION_WARN,
    EquivalenceData,
    GaussianMeasure,
    equivalence_data,
    exact_bhattacharyya,
    exact_hellinger,
    exact_kl,
    exact_renyi,
    log_radon_nikodym,
    log_radon_nikodym_batch,
    regularized_bhattacharyya,
    regularized_hellinger,
    regularized_kl,
    regularized_renyi,
)
from .bayes import LinearGaussianModel, kl_posterior_prior, posterior
from .lab import (
    DIVERGENCE_KINDS,
    SpectrumFamily,
    SweepRecord,
    default_rn_pair,
    exact_divergence,
    gauss_exp_quadratic,
    gen_measure,
    mc_kl_check,
    mc_rn_normalization,
    moment4_check,
    regularized_divergence,
    sample_gaussian,
    sampler_gate,
    split_seed,
    standard_normal,
    sweep_gamma,
    sweep_r,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CONDITION_WARN",
    "DEFAULT_TOL",
    "DIVERGENCE_KINDS",
    "Degenerate",
    "DimMismatch",
    "ENDPOINT_MARGIN",
    "EigFailure",
    "EquivalenceData",
    "GaussDivError",
    "GaussianMeasure",
    "IllConditioned",
    "LinearGaussianModel",
    "LogDetPath",
    "LogDetResult",
    "NonFinite",
    "NotPSD",
    "NotPositive",
    "NotShifted",
    "ShiftedOperator",
    "SingularPair",
    "Spectrum",
    "SpectrumFamily",
    "SweepRecord",
    "ToleranceConfig",
    "TraceClassBlock",
    "alpha_logdet",
    "alpha_logdet_dual_check",
    "carleman_logdet2",
    "default_rn_pair",
    "equivalence_data",
    "exact_bhattacharyya",
    "exact_divergence",
    "exact_hellinger",
    "exact_kl",
    "exact_renyi",
    "ext_fredholm_logdet",
    "ext_trace",
    "gauss_exp_quadratic",
    "gen_measure",
    "kl_posterior_prior",
    "log_radon_nikodym",
    "log_radon_nikodym_batch",
    "mc_kl_check",
    "mc_rn_normalization",
    "moment4_check",
    "posterior",
    "psd_inv_sqrt",
    "psd_sqrt",
    "regularized_bhattacharyya",
    "regularized_divergence",
    "regularized_hellinger",
    "regularized_kl",
    "regularized_renyi",
    "sample_gaussian",
    "sampler_gate",
    "split_seed",
    "standard_normal",
    "sweep_gamma",
    "sweep_r",
    "shifted_combine",
    "shifted_identity",
    "shifted_inv",
    "shifted_mul",
    "sym_eigen",
    "write_sweep_csv",
]
