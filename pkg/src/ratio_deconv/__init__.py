"""Recover the density of X from the law of Z = X/(X+Y) when Y is known.

The distribution of Y must factor as f_Y(s x) = A(s) B(x) C(s x) with C one of
three kernels (exponential-power, linear-exponential, power-law); the density
of X then follows from one inverse Laplace transform, an inverse Laplace
transform plus a running integral, or an iterated inverse Laplace transform.
"""
from ratio_deconv._kernels import BACKEND
from ratio_deconv.closed_form import CASE_NAMES, OracleCase, get_case
from ratio_deconv.decomposition import (
    ExpPower,
    KernelDecomposition,
    LinearExp,
    PowerLaw,
    decompose,
    validate_decomposition,
)
from ratio_deconv.deconvolve import (
    DeconvolutionProblem,
    DensityGrid,
    GridSpec,
    deconvolve,
    deconvolve_exp_power,
    deconvolve_linear_exp,
    deconvolve_power_law,
    forward_density,
)
from ratio_deconv.distributions import DistributionSpec, cdf, logpdf, pdf, pdf_complex, sample
from ratio_deconv.errors import (
    CapabilityError,
    ConfigError,
    ContractError,
    ConvergenceError,
    CoverageError,
    DomainError,
    NumericError,
    RatioDeconvError,
    UnknownCaseError,
    ValidationError,
)
from ratio_deconv.laplace import (
    GaverStehfest,
    InversionConfig,
    Talbot,
    gaver_stehfest,
    invert,
    invert_iterated,
    talbot,
)
from ratio_deconv.special import hyp1f1, hyp2f1, ln_gamma
from ratio_deconv.verify import VerificationReport, run_case

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CASE_NAMES", "OracleCase", "get_case",
    "ExpPower", "KernelDecomposition", "LinearExp", "PowerLaw", "decompose",
    "validate_decomposition",
    "DeconvolutionProblem", "DensityGrid", "GridSpec", "deconvolve", "deconvolve_exp_power",
    "deconvolve_linear_exp", "deconvolve_power_law", "forward_density",
    "DistributionSpec", "cdf", "logpdf", "pdf", "pdf_complex", "sample",
    "CapabilityError", "ConfigError", "ContractError", "ConvergenceError", "CoverageError",
    "DomainError", "NumericError", "RatioDeconvError", "UnknownCaseError", "ValidationError",
    "GaverStehfest", "InversionConfig", "Talbot", "gaver_stehfest", "invert",
    "invert_iterated", "talbot",
    "hyp1f1", "hyp2f1", "ln_gamma",
    "VerificationReport", "run_case",
]
