"""Sparse multipath channel model with spatial common sparsity.

Each user's channel is S discrete paths (complex gain, delay, angle of
departure). All antennas of the uniform linear array see the same path
set; the per-antenna gain is a steering-vector phase rotation and the
per-antenna delay an extra propagation offset, which together give the
frequency-domain channel row on one OFDM subcarrier.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import ConfigError, NumericalContractError
from .numkernel import RngStream, sample_complex_gaussian, sample_uniform_angle

__all__ = [
    "GainMode",
    "SystemConfig",
    "UserChannelParams",
    "ChannelMatrix",
    "sample_user_params",
    "per_antenna_gain",
    "per_antenna_delay",
    "freq_response_row",
    "build_channel_matrix",
    "gaussian_baseline",
]

SPEED_OF_LIGHT = 2.99792458e8


class GainMode(str, Enum):
    """How per-path complex gains are drawn."""

    NORMALIZED_ENERGY = "NormalizedEnergy"  # CN draws rescaled so sum |alpha|^2 = 1
    COMPLEX_GAUSSIAN = "ComplexGaussian"  # i.i.d. CN(0, 1/S)


@dataclass(frozen=True)
class SystemConfig:
    """Physical and simulation parameters of the MIMO-OFDM system."""

    m_antennas: int = 128
    k_users: int = 16
    fc_hz: float = 2e9
    fs_hz: float = 1e7
    n_fft: int = 4096
    n_guard: int = 64
    s_paths: int = 6
    d_over_lambda: float = 0.5
    subcarrier: int = 1
    gain_mode: GainMode = GainMode.COMPLEX_GAUSSIAN
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if self.m_antennas < 1 or self.k_users < 1:
            raise ConfigError("antenna and user counts must be positive")
        if self.fc_hz <= 0 or self.fs_hz <= 0 or self.c <= 0:
            raise ConfigError("frequencies and propagation speed must be positive")
        if self.n_fft < 1 or not 1 <= self.subcarrier <= self.n_fft:
            raise ConfigError(
                f"subcarrier index must lie in [1, {self.n_fft}], got {self.subcarrier}"
            )
        if self.s_paths < 1 or self.s_paths > self.n_guard:
            raise ConfigError(
                f"path count S={self.s_paths} must lie in [1, N_g={self.n_guard}]"
            )
        if self.d_over_lambda <= 0:
            raise ConfigError("antenna spacing must be positive")
        if not isinstance(self.gain_mode, GainMode):
            object.__setattr__(self, "gain_mode", GainMode(self.gain_mode))
        if self.narrowband_offset >= 1.0:
            raise ConfigError(
                "n*fs/(N*fc) must be < 1 (carrier must dominate the bandwidth)"
            )

    @property
    def wavelength(self) -> float:
        return self.c / self.fc_hz

    @property
    def gamma_n(self) -> float:
        """Subcarrier frequency offset n * fs / N."""
        return self.subcarrier * self.fs_hz / self.n_fft

    @property
    def narrowband_offset(self) -> float:
        """lambda * gamma_n / c = n * fs / (N * fc), small by assumption."""
        return self.subcarrier * self.fs_hz / (self.n_fft * self.fc_hz)

    @property
    def steering_coeff(self) -> float:
        """a = 2*pi*(d/lambda)*(1 - lambda*gamma_n/c), the per-antenna
        phase increment per unit sin(AoD)."""
        a = 2.0 * np.pi * self.d_over_lambda * (1.0 - self.narrowband_offset)
        if a <= 0:
            raise ConfigError("steering coefficient a must be positive")
        return a

    def with_updates(self, **kwargs) -> "SystemConfig":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class UserChannelParams:
    """One user's sparse path set: gains, delays (s), AoDs (rad)."""

    gains: np.ndarray
    delays: np.ndarray
    aods: np.ndarray

    def __post_init__(self):
        gains = np.asarray(self.gains, dtype=np.complex128)
        delays = np.asarray(self.delays, dtype=np.float64)
        aods = np.asarray(self.aods, dtype=np.float64)
        if not gains.shape == delays.shape == aods.shape or gains.ndim != 1:
            raise ConfigError("gains, delays and aods must be 1-D of equal length")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "aods", aods)

    @property
    def path_count(self) -> int:
        return self.gains.shape[0]

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.gains) ** 2))


@dataclass(frozen=True)
class ChannelMatrix:
    """K x M frequency-domain channel matrix on one subcarrier.

    Row k is user k's channel vector across the M array antennas.
    """

    entries: np.ndarray
    subcarrier: int = 1

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2:
            raise ConfigError("channel matrix must be 2-D")
        if not np.all(np.isfinite(entries.view(np.float64))):
            raise NumericalContractError("channel matrix contains non-finite entries")
        object.__setattr__(self, "entries", entries)

    @property
    def k_users(self) -> int:
        return self.entries.shape[0]

    @property
    def m_antennas(self) -> int:
        return self.entries.shape[1]

    def gram(self) -> np.ndarray:
        """G G*, the K x K Hermitian Gram matrix."""
        g = self.entries
        a = g @ g.conj().T
        return (a + a.conj().T) / 2.0


def sample_user_params(config: SystemConfig, rng: RngStream) -> UserChannelParams:
    """Draw one user's sparse path set.

    Delays are S distinct taps on the guard-interval grid with tap 0
    forced as the first arrival; AoDs are i.i.d. uniform on [0, 2*pi);
    gains follow the configured mode.
    """
    s = config.s_paths
    gen = rng.generator
    if s == 1:
        taps = np.array([0])
    else:
        rest = gen.choice(config.n_guard - 1, size=s - 1, replace=False) + 1
        taps = np.concatenate([[0], np.sort(rest)])
    delays = taps / config.fs_hz

    aods = sample_uniform_angle(rng, size=s)
    gains = sample_complex_gaussian(rng, 1.0 / s, size=s)
    if config.gain_mode is GainMode.NORMALIZED_ENERGY:
        gains = gains / np.sqrt(np.sum(np.abs(gains) ** 2))
    return UserChannelParams(gains=gains, delays=delays, aods=aods)


def per_antenna_gain(alpha: complex, theta: float, m: int, config: SystemConfig) -> complex:
    """Path gain at antenna m: alpha rotated by the steering phase
    exp(j*2*pi*m*(d/lambda)*sin(theta))."""
    phase = 2.0 * np.pi * m * config.d_over_lambda * np.sin(theta)
    return alpha * complex(np.cos(phase), np.sin(phase))


def per_antenna_delay(tau: float, theta: float, m: int, config: SystemConfig) -> float:
    """Path delay at antenna m: tau plus the far-field propagation
    offset m*d*sin(theta)/c."""
    d_meters = config.d_over_lambda * config.wavelength
    return tau + m * d_meters * np.sin(theta) / config.c


def freq_response_row(params: UserChannelParams, config: SystemConfig) -> np.ndarray:
    """Frequency response across the array on the configured subcarrier.

    Entry m is sum_s alpha_s * exp(j*a*m*sin(theta_s)) * mu_s with
    mu_s = exp(-j*2*pi*gamma_n*tau_s).
    """
    a = config.steering_coeff
    mu = np.exp(-2j * np.pi * config.gamma_n * params.delays)
    z = params.gains * mu
    m_idx = np.arange(config.m_antennas)
    phases = np.exp(1j * a * np.outer(m_idx, np.sin(params.aods)))
    return phases @ z


def build_channel_matrix(config: SystemConfig, rng: RngStream) -> ChannelMatrix:
    """K independent user rows; row k is driven only by rng.child(k)."""
    rows = [
        freq_response_row(sample_user_params(config, rng.child(k)), config)
        for k in range(config.k_users)
    ]
    return ChannelMatrix(entries=np.vstack(rows), subcarrier=config.subcarrier)


def gaussian_baseline(m_antennas: int, k_users: int, rng: RngStream) -> ChannelMatrix:
    """Ideal i.i.d. CN(0,1) channel matrix (identity large-scale fading)."""
    entries = sample_complex_gaussian(rng, 1.0, size=(k_users, m_antennas))
    return ChannelMatrix(entries=entries)
