"""Moment formulas, bounds, and Monte Carlo estimators.

The core quantity is the normalized inner product g_p g_q*/M of two
users' channel rows. Averaging its steering phases over uniform AoDs
turns every cross-antenna term into a J0 factor, which yields closed
forms for the conditional mean (given gains), the conditional second
moment, Cauchy-Schwarz upper bounds, and -- for i.i.d. CN(0,1/S)
gains -- an exact zero mean and a pure double-J0-sum variance. The
Monte Carlo estimators here exist to validate those closed forms.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import (
    ChannelMatrix,
    GainMode,
    SystemConfig,
    UserChannelParams,
    freq_response_row,
    sample_user_params,
)
from .errors import ConfigError, NumericalContractError
from .numkernel import RngStream, bessel_j0, hermitian_eigenvalues, logdet_identity_plus

__all__ = [
    "MomentEstimate",
    "EigenSummary",
    "CapacityResult",
    "normalized_inner_product",
    "mc_moments",
    "a_param",
    "upsilon",
    "upsilon_bound",
    "analytical_mean_given_gains",
    "analytical_second_moment_given_gains",
    "second_moment_upper_bound",
    "analytical_mean_cn",
    "analytical_variance_cn",
    "eigen_summary",
    "capacity",
    "empirical_cdf",
]


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo mean / second moment / variance of g_p g_q*/M."""

    mean: complex
    second_moment: float
    variance: float
    trials: int
    m_antennas: int
    d_over_lambda: float
    subcarrier: int
    s_paths: int
    gain_mode: GainMode

    @property
    def mean_std_error(self) -> float:
        """CLT standard error of the complex sample mean."""
        return float(np.sqrt(self.variance / self.trials))


@dataclass(frozen=True)
class EigenSummary:
    """Extreme eigenvalues and conditioning of one G G* realization."""

    lambda_min: float
    lambda_max: float
    condition_number: float


@dataclass(frozen=True)
class CapacityResult:
    """Log-det capacity of one realization plus the large-M asymptote."""

    capacity_bits: float
    per_user: float
    rho_d: float
    asymptotic_bits: float


def normalized_inner_product(g_p: np.ndarray, g_q: np.ndarray) -> complex:
    """(1/M) * sum_m g_p[m] * conj(g_q[m])."""
    g_p = np.asarray(g_p)
    g_q = np.asarray(g_q)
    if g_p.shape != g_q.shape or g_p.ndim != 1:
        raise ConfigError(f"row length mismatch: {g_p.shape} vs {g_q.shape}")
    return complex(np.vdot(g_q, g_p) / g_p.shape[0])


def a_param(config: SystemConfig) -> float:
    """Steering coefficient a = 2*pi*(d/lambda)*(1 - n*fs/(N*fc))."""
    return config.steering_coeff


def _j0_vector(config: SystemConfig) -> np.ndarray:
    """J0(a*m) for m = 0 .. M-1."""
    a = config.steering_coeff
    return bessel_j0(a * np.arange(config.m_antennas))


def _zeta(params: UserChannelParams, config: SystemConfig) -> np.ndarray:
    """Delay-rotated gains z_s = alpha_s * exp(-j*2*pi*gamma_n*tau_s)."""
    return params.gains * np.exp(-2j * np.pi * config.gamma_n * params.delays)


def upsilon(
    params_p: UserChannelParams, params_q: UserChannelParams, config: SystemConfig
) -> complex:
    """Cross-user gain coupling: sum over path pairs of z_p * conj(z_q)."""
    return complex(np.sum(_zeta(params_p, config)) * np.conj(np.sum(_zeta(params_q, config))))


def upsilon_bound(s_p: int, s_q: int) -> float:
    """Cauchy-Schwarz bound sqrt(S_p * S_q) on |upsilon| for unit-energy gains."""
    return float(np.sqrt(s_p * s_q))


def analytical_mean_given_gains(
    params_p: UserChannelParams, params_q: UserChannelParams, config: SystemConfig
) -> complex:
    """AoD-averaged mean of g_p g_q*/M with gains and delays frozen:
    upsilon * (1/M) * sum_m J0(a*m)^2."""
    j0 = _j0_vector(config)
    return upsilon(params_p, params_q, config) * float(np.sum(j0**2)) / config.m_antennas


def _j0_sums(config: SystemConfig):
    """The three J0 double sums over (m, m'), exploiting that the
    difference kernel is Toeplitz so only O(M) J0 values are needed.

    Returns (A, B, D):
      A = sum J0(a(m-m'))^2
      B = sum J0(a(m-m')) J0(am) J0(am')
      D = (sum_m J0(am)^2)^2
    """
    m = config.m_antennas
    j0 = _j0_vector(config)
    lags = np.arange(1, m)
    j0_sq = j0**2
    a_sum = m * j0_sq[0] + 2.0 * float(np.sum((m - lags) * j0_sq[lags]))
    diff = np.abs(np.arange(m)[:, None] - np.arange(m)[None, :])
    b_sum = float(j0 @ j0[diff] @ j0)
    d_sum = float(np.sum(j0_sq)) ** 2
    return a_sum, b_sum, d_sum


def analytical_second_moment_given_gains(
    params_p: UserChannelParams, params_q: UserChannelParams, config: SystemConfig
) -> float:
    """AoD-averaged E|g_p g_q*/M|^2 with gains and delays frozen.

    The four path-pair groups of the expansion collapse onto the three
    J0 double sums: same-path/same-path pairs weight the difference
    kernel, mixed pairs the difference-times-diagonal kernel, and fully
    distinct pairs the separable kernel.
    """
    zp = _zeta(params_p, config)
    zq = _zeta(params_q, config)
    p_energy = float(np.sum(np.abs(zp) ** 2))
    q_energy = float(np.sum(np.abs(zq) ** 2))
    p_cross = abs(np.sum(zp)) ** 2 - p_energy  # sum over distinct path pairs
    q_cross = abs(np.sum(zq)) ** 2 - q_energy

    a_sum, b_sum, d_sum = _j0_sums(config)
    m2 = config.m_antennas**2
    value = (
        p_energy * q_energy * a_sum
        + (p_energy * q_cross + q_energy * p_cross) * b_sum
        + p_cross * q_cross * d_sum
    ) / m2
    if value < -1e-12:
        raise NumericalContractError(f"second moment came out negative: {value:.3e}")
    return max(value, 0.0)


def second_moment_upper_bound(
    config: SystemConfig, s_p: int | None = None, s_q: int | None = None
) -> float:
    """Cauchy-Schwarz bound on the conditional second moment for
    unit-energy gains."""
    s_p = config.s_paths if s_p is None else s_p
    s_q = config.s_paths if s_q is None else s_q
    a_sum, b_sum, d_sum = _j0_sums(config)
    m2 = config.m_antennas**2
    return (a_sum + (s_p + s_q - 2) * b_sum + (s_p - 1) * (s_q - 1) * d_sum) / m2


def _require_cn_mode(config: SystemConfig) -> None:
    if config.gain_mode is not GainMode.COMPLEX_GAUSSIAN:
        raise ConfigError(
            "closed-form CN moments require gain_mode=ComplexGaussian, "
            f"got {config.gain_mode.value}"
        )


def analytical_mean_cn(config: SystemConfig) -> complex:
    """E{g_p g_q*/M} under i.i.d. CN(0,1/S) gains: exactly zero."""
    _require_cn_mode(config)
    return 0j


def analytical_variance_cn(config: SystemConfig) -> float:
    """var{g_p g_q*/M} under i.i.d. CN(0,1/S) gains:
    (1/M^2) * sum_{m,m'} J0(a(m-m'))^2."""
    _require_cn_mode(config)
    a_sum, _, _ = _j0_sums(config)
    return a_sum / config.m_antennas**2


def _map_trials(trials: int, fn, threads: int | None):
    """Evaluate fn(i) for i in range(trials), results in trial order.

    Order of the returned list never depends on the thread count, so
    any fixed-order reduction over it is bit-reproducible.
    """
    if threads is None:
        threads = min(4, os.cpu_count() or 1)
    if threads <= 1 or trials < 64:
        return [fn(i) for i in range(trials)]
    results = [None] * trials
    chunk = -(-trials // threads)

    def worker(start):
        for i in range(start, min(start + chunk, trials)):
            results[i] = fn(i)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(worker, range(0, trials, chunk)))
    return results


def mc_moments(
    config: SystemConfig,
    trials: int,
    seed: int,
    threads: int | None = None,
    root: RngStream | None = None,
) -> MomentEstimate:
    """Monte Carlo moments of g_p g_q*/M over independent user pairs.

    Trial i derives its randomness from stream (seed, i), so the
    estimate is deterministic for a given seed regardless of threading.
    """
    if trials < 2:
        raise ConfigError("mc_moments needs at least 2 trials")
    if root is None:
        root = RngStream(seed)

    def one_trial(i: int) -> complex:
        trial_rng = root.child(i)
        g_p = freq_response_row(sample_user_params(config, trial_rng.child(0)), config)
        g_q = freq_response_row(sample_user_params(config, trial_rng.child(1)), config)
        return normalized_inner_product(g_p, g_q)

    values = np.array(_map_trials(trials, one_trial, threads), dtype=np.complex128)
    mean = complex(np.mean(values))
    second = float(np.mean(np.abs(values) ** 2))
    variance = second - abs(mean) ** 2
    return MomentEstimate(
        mean=mean,
        second_moment=second,
        variance=variance,
        trials=trials,
        m_antennas=config.m_antennas,
        d_over_lambda=config.d_over_lambda,
        subcarrier=config.subcarrier,
        s_paths=config.s_paths,
        gain_mode=config.gain_mode,
    )


def eigen_summary(channel: ChannelMatrix) -> EigenSummary:
    """Extreme eigenvalues of G G* and their ratio."""
    if channel.k_users > channel.m_antennas:
        raise ConfigError("eigen summary expects K <= M")
    eigs = hermitian_eigenvalues(channel.gram())
    floor = -1e-9 * float(np.linalg.norm(channel.gram()))
    if eigs[0] < floor:
        raise NumericalContractError(f"G G* not PSD within tolerance: {eigs[0]:.3e}")
    lam_min = max(float(eigs[0]), 0.0)
    lam_max = max(float(eigs[-1]), lam_min)
    cond = lam_max / lam_min if lam_min > 0.0 else float("inf")
    return EigenSummary(lambda_min=lam_min, lambda_max=lam_max, condition_number=cond)


def capacity(channel: ChannelMatrix, rho_d: float, beta=None) -> CapacityResult:
    """Log-det capacity log2 det(I + rho * (D^1/2 G)(D^1/2 G)*) with
    D = diag(beta) large-scale fading (identity by default), plus the
    large-M asymptote sum_k log2(1 + rho * M * beta_k)."""
    if rho_d < 0:
        raise ConfigError("transmit power rho_d must be >= 0")
    k, m = channel.k_users, channel.m_antennas
    if beta is None:
        beta = np.ones(k)
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (k,) or np.any(beta < 0):
        raise ConfigError(f"beta must be {k} nonnegative weights")
    scaled = np.sqrt(beta)[:, None] * channel.entries
    gram = scaled @ scaled.conj().T
    bits = logdet_identity_plus((gram + gram.conj().T) / 2.0, rho_d)
    asymptotic = float(np.sum(np.log2(1.0 + rho_d * m * beta)))
    return CapacityResult(
        capacity_bits=bits, per_user=bits / k, rho_d=rho_d, asymptotic_bits=asymptotic
    )


def empirical_cdf(samples) -> list[tuple[float, float]]:
    """Right-continuous empirical CDF: probability i/n at the i-th
    order statistic."""
    arr = np.sort(np.asarray(samples, dtype=np.float64))
    if arr.size == 0:
        raise ConfigError("empirical_cdf needs at least one sample")
    n = arr.size
    return [(float(v), (i + 1) / n) for i, v in enumerate(arr)]
