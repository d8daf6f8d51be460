"""Fast invariant suite behind the `validate` CLI subcommand.

Each check is a cheap, self-contained re-derivation of one of the
package's contracts; the whole suite is sized to finish well under
two minutes on a laptop.
"""

from __future__ import annotations

import numpy as np

from .analysis import (
    analytical_mean_given_gains,
    analytical_second_moment_given_gains,
    analytical_variance_cn,
    capacity,
    mc_moments,
    normalized_inner_product,
    second_moment_upper_bound,
    upsilon,
    upsilon_bound,
)
from .channel import (
    GainMode,
    SystemConfig,
    build_channel_matrix,
    freq_response_row,
    gaussian_baseline,
    per_antenna_delay,
    per_antenna_gain,
    sample_user_params,
)
from .numkernel import (
    RngStream,
    bessel_j0,
    hermitian_eigenvalues,
    logdet_identity_plus,
    sample_complex_gaussian,
)

__all__ = ["run_validation"]


def _direct_row(params, config):
    """Frequency response composed from per-antenna gains and delays,
    term by term; an independent route to freq_response_row."""
    gamma = config.gamma_n
    row = np.zeros(config.m_antennas, dtype=np.complex128)
    for m in range(config.m_antennas):
        for alpha, tau, theta in zip(params.gains, params.delays, params.aods):
            gain = per_antenna_gain(alpha, theta, m, config)
            delay = per_antenna_delay(tau, theta, m, config)
            row[m] += gain * np.exp(-2j * np.pi * gamma * delay)
    return row


def _check_bessel():
    x = np.linspace(1e-6, 100.0, 2000)
    values = bessel_j0(x)
    ok = bessel_j0(0.0) == 1.0 and np.all(np.abs(values) < 1.0)
    root = abs(bessel_j0(2.404825557695773))
    return ok and root < 1e-10, f"|J0| bounded, J0(first root) = {root:.2e}"


def _check_row_identity(seed):
    config = SystemConfig(m_antennas=8, k_users=2, s_paths=4)
    worst = 0.0
    for i in range(20):
        params = sample_user_params(config, RngStream(seed, (900, i)))
        dev = np.max(np.abs(freq_response_row(params, config) - _direct_row(params, config)))
        worst = max(worst, float(dev))
    return worst < 1e-10, f"steering vs per-antenna composition, max dev {worst:.2e}"


def _check_jacobi(seed):
    worst = 0.0
    for i in range(20):
        rng = RngStream(seed, (901, i))
        order = 2 + i % 15
        raw = sample_complex_gaussian(rng, 1.0, size=(order, order))
        herm = (raw + raw.conj().T) / 2.0
        eigs = hermitian_eigenvalues(herm)
        dev = abs(float(np.sum(eigs)) - float(np.trace(herm).real)) / order
        worst = max(worst, dev)
    return worst < 1e-9, f"eigenvalue sum vs trace, max dev/order {worst:.2e}"


def _check_logdet(seed):
    rng = RngStream(seed, (902,))
    raw = sample_complex_gaussian(rng, 1.0, size=(3, 5))
    psd = raw @ raw.conj().T
    zero = logdet_identity_plus(psd, 0.0)
    b = np.eye(3) + 2.0 * psd
    direct = float(np.log2(np.linalg.det(b).real))
    dev = abs(logdet_identity_plus(psd, 2.0) - direct)
    return zero == 0.0 and dev < 1e-9, f"rho=0 exact, 3x3 determinant dev {dev:.2e}"


def _check_bounds(seed):
    config = SystemConfig(
        m_antennas=16, k_users=2, s_paths=3, gain_mode=GainMode.NORMALIZED_ENERGY
    )
    bound2 = second_moment_upper_bound(config)
    violations = 0
    for i in range(100):
        rng = RngStream(seed, (903, i))
        p = sample_user_params(config, rng.child(0))
        q = sample_user_params(config, rng.child(1))
        if abs(upsilon(p, q, config)) > upsilon_bound(3, 3) + 1e-12:
            violations += 1
        if analytical_second_moment_given_gains(p, q, config) > bound2 + 1e-12:
            violations += 1
    return violations == 0, f"{violations} bound violations over 100 gain sets"


def _check_variance_trend():
    values = [
        analytical_variance_cn(SystemConfig(m_antennas=m, d_over_lambda=0.5))
        for m in (8, 32, 128, 512)
    ]
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    ratio = values[3] / values[1]
    return decreasing and ratio < 0.25, f"variance falls with M, v(512)/v(32) = {ratio:.3f}"


def _check_mc_variance(seed):
    config = SystemConfig(m_antennas=32, k_users=2, d_over_lambda=0.5)
    est = mc_moments(config, 2000, seed)
    ana = analytical_variance_cn(config)
    rel = abs(est.variance - ana) / ana
    return rel < 0.15, f"MC vs analytical variance, rel dev {rel:.3f} at 2000 trials"


def _check_determinism(seed):
    config = SystemConfig(m_antennas=16, k_users=2)
    single = mc_moments(config, 256, seed, threads=1)
    multi = mc_moments(config, 256, seed, threads=4)
    again = mc_moments(config, 256, seed, threads=4)
    ok = single == multi == again
    return ok, "identical moments across thread counts and repeats"


def _check_inner_product(seed):
    rng = RngStream(seed, (904,))
    g_p = sample_complex_gaussian(rng, 1.0, size=16)
    g_q = sample_complex_gaussian(rng, 1.0, size=16)
    lhs = normalized_inner_product(g_p, g_q)
    rhs = np.conj(normalized_inner_product(g_q, g_p))
    return lhs == rhs, "conjugate symmetry of the normalized inner product"


def _check_energy(seed):
    config = SystemConfig(gain_mode=GainMode.NORMALIZED_ENERGY)
    worst = max(
        abs(sample_user_params(config, RngStream(seed, (905, i))).energy - 1.0)
        for i in range(50)
    )
    return worst < 1e-12, f"unit channel energy, max dev {worst:.2e}"


def _check_capacity(seed):
    rng = RngStream(seed, (906,))
    channel = gaussian_baseline(128, 4, rng)
    result = capacity(channel, 10.0)
    rel = abs(result.capacity_bits - result.asymptotic_bits) / result.asymptotic_bits
    sparse = capacity(build_channel_matrix(SystemConfig(k_users=4), rng.child(0)), 10.0)
    ok = 0.0 <= rel < 0.10 and sparse.capacity_bits >= 0.0
    return ok, f"Gaussian capacity within {rel:.3f} of asymptote at M=128, K=4"


def run_validation(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Run every invariant check; returns (name, passed, detail) rows."""
    checks = [
        ("bessel_j0 bounds and first root", _check_bessel, False),
        ("steering identity", _check_row_identity, True),
        ("jacobi trace identity", _check_jacobi, True),
        ("logdet contracts", _check_logdet, True),
        ("moment bound chain", _check_bounds, True),
        ("asymptotic variance trend", _check_variance_trend, False),
        ("MC variance vs closed form", _check_mc_variance, True),
        ("thread-count determinism", _check_determinism, True),
        ("inner product conjugate symmetry", _check_inner_product, True),
        ("normalized channel energy", _check_energy, True),
        ("capacity sanity", _check_capacity, True),
    ]
    results = []
    for name, fn, takes_seed in checks:
        ok, detail = fn(seed) if takes_seed else fn()
        results.append((name, ok, detail))
    return results
