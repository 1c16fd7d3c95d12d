"""Pilot and data signal generation, cyclic prefix handling, unitary DFT pair.

Signals use the unitary DFT (1/sqrt(N) in both directions); the channel's
frequency response in channel.py uses the non-unitary forward DFT.  Regression
tests pin both conventions because mixing them up is the classic bug here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import OFDM, SINGLE_CARRIER, SystemConfig
from .channel import draw_complex_gaussian

RANDOM_PHASES = "random"
CONSTANT_PHASES = "constant"

_QPSK = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0)


def unitary_dft(v: np.ndarray, axis: int = -1) -> np.ndarray:
    n = v.shape[axis]
    return np.fft.fft(v, axis=axis) / np.sqrt(n)


def unitary_idft(v: np.ndarray, axis: int = -1) -> np.ndarray:
    n = v.shape[axis]
    return np.fft.ifft(v, axis=axis) * np.sqrt(n)


@dataclass(frozen=True)
class PilotBook:
    """Comb-type orthogonal pilots for K users over an N_p-symbol block.

    User u (0-based) occupies tones v with v mod K == u.  Occupied tones carry
    magnitude sqrt(K/N_p) and phase theta[u, v]; random phases keep the
    time-domain pilot non-sparse, which matters once the quantizer is in the
    loop (constant phases concentrate the pilot into sqrt(mu*L)-high spikes).
    """

    phases: np.ndarray       # (K, N_p), meaningful on each user's comb
    freq_pilots: np.ndarray  # (K, N_p) spectrum, zero off-comb
    time_pilots: np.ndarray  # (K, N_p) transmitted signal, unit average power

    @property
    def num_users(self) -> int:
        return self.freq_pilots.shape[0]

    @property
    def pilot_len(self) -> int:
        return self.freq_pilots.shape[1]

    def comb_tones(self, user: int) -> np.ndarray:
        return np.arange(user, self.pilot_len, self.num_users)


def make_pilots(num_users: int, pilot_len: int, rng: np.random.Generator,
                phase_mode: str = RANDOM_PHASES) -> PilotBook:
    if pilot_len % num_users != 0:
        raise ValueError(f"pilot_len {pilot_len} not a multiple of K = {num_users}")
    phases = np.zeros((num_users, pilot_len))
    if phase_mode == RANDOM_PHASES:
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(num_users, pilot_len))
    elif phase_mode != CONSTANT_PHASES:
        raise ValueError(f"unknown phase mode {phase_mode!r}")
    freq = np.zeros((num_users, pilot_len), dtype=complex)
    for u in range(num_users):
        tones = np.arange(u, pilot_len, num_users)
        freq[u, tones] = np.sqrt(num_users / pilot_len) * np.exp(1j * phases[u, tones])
    # transmitted spectrum is sqrt(N_p) * freq_pilots -> unit average power in time
    time = unitary_idft(np.sqrt(pilot_len) * freq, axis=-1)
    return PilotBook(phases=phases, freq_pilots=freq, time_pilots=time)


@dataclass(frozen=True)
class TransmitBlock:
    """One data block: unit-power symbols and the time signal actually sent."""

    symbols: np.ndarray      # (K, N_d)
    time_signal: np.ndarray  # (K, N_d); IDFT of symbols for OFDM, symbols for SC
    mode: str


def draw_data_block(config: SystemConfig, rng: np.random.Generator,
                    constellation: str = "gaussian") -> TransmitBlock:
    """Zero-mean unit-power symbols; Gaussian by default (the rate bound needs
    Gaussian inputs), QPSK offered for constellation scatter demos."""
    k, n = config.num_users, config.data_len
    if constellation == "gaussian":
        symbols = draw_complex_gaussian(rng, (k, n))
    elif constellation == "qpsk":
        symbols = _QPSK[rng.integers(0, 4, size=(k, n))]
    else:
        raise ValueError(f"unknown constellation {constellation!r}")
    if config.waveform == OFDM:
        time = unitary_idft(symbols, axis=-1)
    elif config.waveform == SINGLE_CARRIER:
        time = symbols
    else:
        raise ValueError(f"unknown waveform {config.waveform!r}")
    return TransmitBlock(symbols=symbols, time_signal=time, mode=config.waveform)


def add_cyclic_prefix(x: np.ndarray, num_taps: int) -> np.ndarray:
    """Prepend the last L-1 samples of the block."""
    if num_taps <= 1:
        return x
    return np.concatenate([x[..., -(num_taps - 1):], x], axis=-1)


def strip_cyclic_prefix(y: np.ndarray, num_taps: int) -> np.ndarray:
    """Drop the first L-1 received samples; what remains is the circular block."""
    if num_taps <= 1:
        return y
    return y[..., num_taps - 1:]
