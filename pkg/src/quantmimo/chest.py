"""Per-tap LMMSE channel estimation from one-bit quantized pilot blocks.

The comb pilots turn the quantized pilot spectrum into K decoupled
single-user problems.  De-mapping user u's tones, derotating the known pilot
phases, and inverse-transforming gives the raw per-tap observation

    h'[m, u, l] = rho sqrt(beta P N_p) h[m, u, l] + rho z'[m, u, l] + e'[m, u, l]

with z' ~ CN(0, N0) independent across (m, u, l) and E|e'|^2 the quantizer
error variance.  A scalar Wiener factor per (user, tap) then yields the LMMSE
estimate; per-tap (rather than joint) estimation is exact here because taps
are independent and the observations decouple.

The estimation quality per tap,

    c[u, l] = p[l] beta P N_p / (p[l] beta P N_p + N0 + Q),

uses the wideband limit Q' for Q by default: the base station plausibly knows
only ensemble statistics a priori.  Pass rel_distortion explicitly to study
sensitivity to that choice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import freq_response
from .config import SystemConfig, mean_rx_power
from .linksim import QuantizerStats
from .waveform import PilotBook


@dataclass(frozen=True)
class ChannelEstimate:
    taps: np.ndarray              # (M, K, L) LMMSE estimates
    per_tap_quality: np.ndarray   # (K, L) c[u, l] in [0, 1]
    per_user_quality: np.ndarray  # (K,)  c_u = sum_l c[u, l] p[l]
    freq: np.ndarray              # (M, K, N_d) non-unitary DFT of taps
    mse_empirical: np.ndarray | None = None  # (K,) mean |h~ - h^~|^2 when truth given


def pilot_observation(q_freq: np.ndarray, pilots: PilotBook,
                      config: SystemConfig) -> np.ndarray:
    """Raw per-tap observation h' from the unitary-DFT'd quantized pilot block.

    q_freq is (M, N_p).  Requires N_p >= K*L so the comb sampling of the
    channel spectrum is above the Nyquist rate of the L-tap response.
    """
    m, n_p = q_freq.shape
    k, num_taps = config.num_users, config.num_taps
    if pilots.pilot_len != n_p or pilots.num_users != k:
        raise ValueError("pilot book does not match the received block")
    if n_p < k * num_taps:
        raise ValueError(f"pilot_len {n_p} < K*L = {k * num_taps}: taps unrecoverable")
    ells = np.arange(num_taps)
    out = np.empty((m, k, num_taps), dtype=complex)
    scale = np.sqrt(k / n_p)
    for u in range(k):
        tones = pilots.comb_tones(u)
        derot = np.exp(-1j * pilots.phases[u, tones])
        basis = np.exp(2j * np.pi * np.outer(tones, ells) / n_p)  # (N_p/K, L)
        out[:, u, :] = scale * (q_freq[:, tones] * derot) @ basis
    return out


def tap_quality(config: SystemConfig, rel_distortion: float,
                pilot_len: int | None = None) -> np.ndarray:
    """Estimation quality c[u, l] per user and tap."""
    n_p = config.pilot_len if pilot_len is None else pilot_len
    p = np.asarray(config.pdp.taps)
    rx = np.asarray(config.rx_powers)
    sig = np.outer(rx, p) * n_p  # (K, L)
    return sig / (sig + config.noise_floor + rel_distortion)


def user_quality(config: SystemConfig, rel_distortion: float,
                 pilot_len: int | None = None) -> np.ndarray:
    """Per-user quality c_u = sum_l c[u, l] p[l] = E|h^~|^2 on any tone."""
    p = np.asarray(config.pdp.taps)
    return tap_quality(config, rel_distortion, pilot_len) @ p


def analytic_quality(config: SystemConfig, pilot_excess: float | None = None,
                     quantized: bool | None = None) -> np.ndarray:
    """Closed-form c_u with Q = Q' (quantized) or Q = 0 (unquantized).

    pilot_excess overrides the config's mu = N_p/(K L) for sweeps.
    """
    if quantized is None:
        quantized = config.quantized
    q = mean_rx_power(config) * (np.pi / 2.0 - 1.0) if quantized else 0.0
    n_p = config.pilot_len
    if pilot_excess is not None:
        n_p = pilot_excess * config.num_users * config.num_taps
    return user_quality(config, q, pilot_len=n_p)


def quality_ratio(mu_unquantized: float, mu_quantized: float,
                  config: SystemConfig) -> np.ndarray:
    """Per-user ratio of unquantized quality at mu0 over quantized at mu_q.

    Equals pi/2 exactly at mu0 = mu_q = 1 for equal powers and a uniform
    profile, is below pi/2 for all equal excess factors, and decreases in mu.
    """
    c0 = analytic_quality(config, pilot_excess=mu_unquantized, quantized=False)
    cq = analytic_quality(config, pilot_excess=mu_quantized, quantized=True)
    return c0 / cq


def lmmse_scale(config: SystemConfig, stats: QuantizerStats,
                rel_distortion: float | None = None) -> tuple:
    """Per-(user, tap) Wiener factor applied to h', and the matching c[u, l].

    The factor is c[u, l] / (rho sqrt(beta P N_p)); with the quantizer off
    and no noise it reduces to exactly 1/(rho sqrt(beta P N_p)).
    """
    if rel_distortion is None:
        rel_distortion = stats.rel_distortion_limit
    quality = tap_quality(config, rel_distortion)
    rx = np.asarray(config.rx_powers)
    return quality / (stats.gain * np.sqrt(rx * config.pilot_len))[:, None], quality


def estimate_channel(q_freq: np.ndarray, pilots: PilotBook, config: SystemConfig,
                     stats: QuantizerStats, n_freq: int | None = None,
                     rel_distortion: float | None = None,
                     true_taps: np.ndarray | None = None) -> ChannelEstimate:
    """Full pipeline: comb de-map -> derotate -> per-tap LMMSE -> N_d tones."""
    raw = pilot_observation(q_freq, pilots, config)
    scale, quality = lmmse_scale(config, stats, rel_distortion)
    taps_hat = raw * scale[None, :, :]
    n_freq = config.data_len if n_freq is None else n_freq
    p = np.asarray(config.pdp.taps)
    est = ChannelEstimate(
        taps=taps_hat,
        per_tap_quality=quality,
        per_user_quality=quality @ p,
        freq=freq_response(taps_hat, n_freq),
    )
    if true_taps is not None:
        err = freq_response(true_taps, n_freq) - est.freq
        mse = np.mean(np.abs(err) ** 2, axis=(0, 2))
        est = ChannelEstimate(est.taps, est.per_tap_quality, est.per_user_quality,
                              est.freq, mse_empirical=mse)
    return est
