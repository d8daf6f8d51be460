"""Numerical laboratory for sparse massive-MIMO channels.

Generates channels with spatial common sparsity in time and angle,
evaluates the closed-form Bessel-sum moments of inter-user channel
inner products, and checks asymptotic orthogonality, eigenvalue
conditioning, and log-det capacity by Monte Carlo.
"""

__version__ = "0.1.0"

from .errors import ConfigError, NumericalContractError, ScsMimoError
from .numkernel import (
    RngStream,
    bessel_j0,
    hermitian_eigenvalues,
    logdet_identity_plus,
    sample_complex_gaussian,
    sample_uniform_angle,
)
from .channel import (
    ChannelMatrix,
    GainMode,
    SystemConfig,
    UserChannelParams,
    build_channel_matrix,
    freq_response_row,
    gaussian_baseline,
    per_antenna_delay,
    per_antenna_gain,
    sample_user_params,
)
from .analysis import (
    CapacityResult,
    EigenSummary,
    MomentEstimate,
    a_param,
    analytical_mean_cn,
    analytical_mean_given_gains,
    analytical_second_moment_given_gains,
    analytical_variance_cn,
    capacity,
    eigen_summary,
    empirical_cdf,
    mc_moments,
    normalized_inner_product,
    second_moment_upper_bound,
    upsilon,
    upsilon_bound,
)
from .experiments import (
    ExperimentConfig,
    ResultTable,
    run_capacity,
    run_eigen_cdf,
    run_moments,
)
