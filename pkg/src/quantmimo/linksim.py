"""Propagation, thermal noise, the one-bit quantizer, and its statistics.

The quantizer output is decomposed Bussgang-style as q = rho*y + e with the
Wiener-optimal scalar rho, so the distortion e is uncorrelated with y.  For
IID Rayleigh taps the scalar and the error variance are

    rho = sqrt(2/pi) * E[sqrt(P_rx[n])] / P_mean   ->  sqrt(2/(pi*P_mean))
    E   = 1 - rho^2 * P_mean                       ->  1 - 2/pi

as the number of taps grows, with P_rx[n] the received power conditioned on
the transmit signals and P_mean its average.  E[sqrt(P_rx)] has no closed form
for Gaussian inputs through a general power delay profile, so it is estimated
once per config by Monte Carlo (cached) and reported with its standard error.

The unquantized baseline sets q := rho*y and forces E = Q = 0, so every
downstream code path is identical between the two modes.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import waveform
from .channel import draw_complex_gaussian, substream
from .config import SystemConfig, mean_rx_power

_POWER_CACHE_SAMPLES = 100_000
_ROLE_POWER_DATA = 9001
_ROLE_POWER_PILOT = 9002


@dataclass(frozen=True)
class ReceivedBlock:
    """Analog and quantized receive signals plus the noise-free part."""

    analog: np.ndarray     # (M, N) y
    quantized: np.ndarray  # (M, N) q; equals gain*y when the quantizer is off
    noisefree: np.ndarray  # (M, N) received signal without thermal noise


@dataclass(frozen=True)
class QuantizerStats:
    """Scalar quantizer statistics for one config (and optionally one block)."""

    gain: float                   # Bussgang scaling rho
    gain_stderr: float
    err_var: float                # E = 1 - rho^2 * P_mean; 0 when unquantized
    rel_distortion: float         # Q = E / rho^2
    rel_distortion_limit: float   # Q' = P_mean * (pi/2 - 1); 0 when unquantized
    mean_power: float             # P_mean
    inst_power: np.ndarray | None = None        # P_rx[n] for the attached block
    amplitude_mismatch: np.ndarray | None = None  # tau[n] for the attached block


def quantize_one_bit(y: np.ndarray) -> np.ndarray:
    """Per-sample (sign(Re y) + j sign(Im y)) / sqrt(2); sign(0) := +1.

    Output magnitude is exactly 1 for every sample.
    """
    re = np.where(y.real >= 0, 1.0, -1.0)
    im = np.where(y.imag >= 0, 1.0, -1.0)
    return (re + 1j * im) / np.sqrt(2.0)


def propagate(taps: np.ndarray, tx: np.ndarray, config: SystemConfig,
              rng: np.random.Generator | None):
    """Pass per-user transmit signals through the channel and add noise.

    tx is (K, N) with the cyclic prefix already attached; the output keeps the
    input length (the convolution tail spills into the next block).  Returns
    (y, ybar): the noisy and the noise-free received signals, both (M, N).
    """
    m, k, num_taps = taps.shape
    if tx.shape[0] != k:
        raise ValueError(f"got {tx.shape[0]} transmit signals for {k} users")
    n = tx.shape[1]
    amps = np.sqrt(np.asarray(config.rx_powers))
    n_fft = n + num_taps - 1
    tx_f = np.fft.fft(tx * amps[:, None], n=n_fft, axis=-1)
    taps_f = np.fft.fft(taps, n=n_fft, axis=-1)
    ybar = np.fft.ifft(np.einsum("mkf,kf->mf", taps_f, tx_f), axis=-1)[:, :n]
    if rng is None or config.noise_floor == 0:
        noise = 0.0
    else:
        noise = draw_complex_gaussian(rng, (m, n), variance=config.noise_floor)
    return ybar + noise, ybar


def receive(taps, tx, config, rng, gain: float) -> ReceivedBlock:
    """propagate + quantize; when the quantizer is off, q := gain * y."""
    y, ybar = propagate(taps, tx, config, rng)
    q = quantize_one_bit(y) if config.quantized else gain * y
    return ReceivedBlock(analog=y, quantized=q, noisefree=ybar)


def inst_rx_power(tx: np.ndarray, config: SystemConfig) -> np.ndarray:
    """Expected received power given the transmit signals, cyclic in the block:

    P_rx[n] = N0 + sum_k beta_k P_k sum_l p[l] |x_k[n-l]|^2
    """
    k, n = tx.shape
    p_f = np.fft.fft(np.asarray(config.pdp.taps), n=n)
    mag_f = np.fft.fft(np.abs(tx) ** 2, axis=-1)
    per_user = np.fft.ifft(mag_f * p_f, axis=-1).real
    rx = np.asarray(config.rx_powers)
    return config.noise_floor + rx @ per_user


def mean_sqrt_rx_power(config: SystemConfig, block: str = "data",
                       constellation: str = "gaussian",
                       phase_mode: str = waveform.RANDOM_PHASES,
                       nsamples: int = _POWER_CACHE_SAMPLES):
    """Monte-Carlo estimate of E[sqrt(P_rx[n])] for the given block ensemble.

    Cached per config; returns (estimate, standard_error).  Deterministic for
    a fixed config.seed so reruns are bit-reproducible.
    """
    from dataclasses import replace
    # the estimate only depends on the transmit ensemble and powers
    key_cfg = replace(config, quantized=True, combiner="mrc", rzfc_lambda=None)
    return _mean_sqrt_rx_power(key_cfg, block, constellation, phase_mode, nsamples)


@lru_cache(maxsize=None)
def _mean_sqrt_rx_power(config: SystemConfig, block: str, constellation: str,
                        phase_mode: str, nsamples: int):
    role = _ROLE_POWER_DATA if block == "data" else _ROLE_POWER_PILOT
    rng = substream(config.seed, role)
    samples = []
    got = 0
    while got < nsamples:
        if block == "data":
            tx = waveform.draw_data_block(config, rng, constellation).time_signal
        elif block == "pilot":
            tx = waveform.make_pilots(config.num_users, config.pilot_len, rng,
                                      phase_mode).time_pilots
        else:
            raise ValueError(f"unknown block type {block!r}")
        samples.append(np.sqrt(inst_rx_power(tx, config)))
        got += tx.shape[1]
    flat = np.concatenate(samples)[:nsamples]
    return float(flat.mean()), float(flat.std(ddof=1) / math.sqrt(flat.size))


def bussgang_gain_empirical(y: np.ndarray, q: np.ndarray) -> float:
    """Sample Wiener scaling: Re(sum y* q) / sum |y|^2."""
    if y.size == 0:
        raise ValueError("empty input")
    return float(np.real(np.vdot(y, q)) / np.sum(np.abs(y) ** 2))


def bussgang_gain_model(config: SystemConfig, block: str = "data",
                        constellation: str = "gaussian",
                        phase_mode: str = waveform.RANDOM_PHASES) -> float:
    """rho = sqrt(2/pi) E[sqrt(P_rx)] / P_mean, with the cached power estimate."""
    mean_sqrt, _ = mean_sqrt_rx_power(config, block, constellation, phase_mode)
    return math.sqrt(2.0 / math.pi) * mean_sqrt / mean_rx_power(config)


def bussgang_gain_limit(config: SystemConfig) -> float:
    """Many-tap limit sqrt(2 / (pi * P_mean)); upper bound on rho (Jensen)."""
    return math.sqrt(2.0 / (math.pi * mean_rx_power(config)))


def quantization_error(y: np.ndarray, q: np.ndarray, gain: float) -> np.ndarray:
    """Distortion e = q - gain * y; its variance tends to 1 - 2/pi for many taps."""
    return q - gain * y


def error_variance_model(config: SystemConfig, gain: float) -> float:
    return 0.0 if not config.quantized else 1.0 - gain * gain * mean_rx_power(config)


def rel_distortion_limit(config: SystemConfig) -> float:
    """Q' = P_mean (pi/2 - 1); the wideband limit of Q = E / rho^2."""
    if not config.quantized:
        return 0.0
    return mean_rx_power(config) * (math.pi / 2.0 - 1.0)


def quantizer_stats(config: SystemConfig, block: str = "data",
                    constellation: str = "gaussian",
                    phase_mode: str = waveform.RANDOM_PHASES,
                    tx: np.ndarray | None = None) -> QuantizerStats:
    """Assemble the scalar statistics; attach P_rx[n] and tau[n] if tx given."""
    p_mean = mean_rx_power(config)
    mean_sqrt, stderr = mean_sqrt_rx_power(config, block, constellation, phase_mode)
    gain = math.sqrt(2.0 / math.pi) * mean_sqrt / p_mean
    if config.quantized:
        err = 1.0 - gain * gain * p_mean
        rel = err / (gain * gain)
        rel_lim = p_mean * (math.pi / 2.0 - 1.0)
    else:
        err, rel, rel_lim = 0.0, 0.0, 0.0
    inst = tau = None
    if tx is not None:
        inst = inst_rx_power(tx, config)
        tau = amplitude_mismatch(tx, config, mean_sqrt)
    return QuantizerStats(gain=gain, gain_stderr=math.sqrt(2.0 / math.pi) * stderr / p_mean,
                          err_var=err, rel_distortion=rel, rel_distortion_limit=rel_lim,
                          mean_power=p_mean, inst_power=inst, amplitude_mismatch=tau)


def amplitude_mismatch(tx: np.ndarray, config: SystemConfig,
                       mean_sqrt_power: float) -> np.ndarray:
    """tau[n] = sqrt(P_rx[n])/P_rx[n] - E[sqrt(P_rx)]/P_mean.

    The coefficient of the signal-proportional ("amplitude") part of the
    quantization distortion; vanishes almost surely as the tap count grows.
    """
    inst = inst_rx_power(tx, config)
    return 1.0 / np.sqrt(inst) - mean_sqrt_power / mean_rx_power(config)


def amplitude_decomposition(err: np.ndarray, noisefree: np.ndarray,
                            tau: np.ndarray):
    """Split e into sqrt(2/pi) tau[n] ybar[m, n] plus a residual d.

    The residual is uncorrelated with the channel taps conditioned on the
    transmit signals; only the first (coherent) part scales symbol amplitudes.
    """
    coherent = math.sqrt(2.0 / math.pi) * tau[None, :] * noisefree
    return coherent, err - coherent


def export_scatter_csv(path, records) -> None:
    """Symbol-estimate scatter rows: (user, symbol_index, re, im, mode, L, K)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "symbol_index", "re", "im", "mode", "L", "K"])
        for rec in records:
            writer.writerow(rec)
