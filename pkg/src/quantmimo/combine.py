"""Per-tone linear combiners (MRC / ZFC / regularized ZFC) and their application.

Weights are built per frequency tone from the (estimated) channel matrix and
row-scaled by 1/sqrt(alpha_k) with alpha_k the expected row energy, so the
combined thermal noise keeps variance N0.  Downstream rate estimates are
invariant to any fixed row scaling; what they are *not* invariant to is a
row scaling that varies across channel realizations, which silently caps the
measurable SINR.  Alpha is therefore estimated once per scenario over a
dedicated ensemble (ensemble_alpha) and reused for every trial; the
per-realization fallback is only a convenience for one-off uses.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import MRC, RZFC, ZFC


class SingularGramError(np.linalg.LinAlgError):
    """Gram matrix too ill-conditioned to invert; the trial should be dropped
    and counted, not silently regularized (that would contaminate ZFC stats)."""

    def __init__(self, condition):
        self.condition = condition
        super().__init__(f"gram matrix condition {condition:.3e} exceeds limit")


@dataclass(frozen=True)
class CombinerWeights:
    weights: np.ndarray  # (N, K, M), rows scaled by 1/sqrt(alpha)
    alpha: np.ndarray    # (K,) row-energy normalizers actually used
    kind: str
    reg: float = 0.0


def _raw_weights(h_freq: np.ndarray, kind: str, reg: float,
                 cond_limit: float) -> np.ndarray:
    h = np.ascontiguousarray(h_freq.transpose(2, 0, 1))  # (N, M, K)
    hh = h.conj().transpose(0, 2, 1)                     # (N, K, M)
    if kind == MRC:
        return hh
    if kind not in (ZFC, RZFC):
        raise ValueError(f"unknown combiner {kind!r}")
    lam = reg if kind == RZFC else 0.0
    gram = hh @ h
    if lam:
        gram = gram + lam * np.eye(gram.shape[-1])
    eig = np.linalg.eigvalsh(gram)
    cond = float(np.max(eig[..., -1] / np.maximum(eig[..., 0], 1e-300)))
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularGramError(cond)
    return np.linalg.solve(gram, hh)


def build_combiner(h_freq: np.ndarray, kind: str, reg: float = 0.0,
                   alpha: np.ndarray | None = None,
                   cond_limit: float = 1e12) -> CombinerWeights:
    """Weights from the per-tone channel matrix h_freq (M, K, N).

    alpha: per-user ensemble row energies from ensemble_alpha(); if omitted,
    the per-realization tone average is used instead.
    """
    raw = _raw_weights(h_freq, kind, reg, cond_limit)
    if alpha is None:
        alpha = row_energy(raw).mean(axis=0)  # (K,)
    alpha = np.asarray(alpha, dtype=float)
    weights = raw / np.sqrt(alpha)[None, :, None]
    return CombinerWeights(weights=weights, alpha=alpha, kind=kind, reg=reg)


def row_energy(weights: np.ndarray) -> np.ndarray:
    """sum_m |w[k, m]|^2 per tone: input (N, K, M), output (N, K)."""
    return np.sum(np.abs(weights) ** 2, axis=-1)


def ensemble_alpha(draw_h_freq, kind: str, reg: float, trials: int,
                   cond_limit: float = 1e12) -> np.ndarray:
    """Expected unnormalized row energy per user, over fresh channel draws.

    draw_h_freq(trial_index) must return an (M, K, N) response drawn from the
    same distribution the combiner will see (true channel for perfect CSI,
    estimated channel otherwise).
    """
    total = None
    count = 0
    for t in range(trials):
        h = draw_h_freq(t)
        raw = _raw_weights(h, kind, reg, cond_limit)
        e = row_energy(raw).mean(axis=0)
        total = e if total is None else total + e
        count += 1
    return total / count


def apply_freq(comb: CombinerWeights, q_freq: np.ndarray) -> np.ndarray:
    """Per-tone combining: xhat~[k, v] = sum_m w[v, k, m] q~[m, v]."""
    return np.einsum("nkm,mn->kn", comb.weights, q_freq)


def impulse_response(comb: CombinerWeights) -> np.ndarray:
    """Time-domain combiner taps w[k, m, l] = (1/N) sum_v w~[v, k, m] e^{2j pi v l / N}."""
    return np.fft.ifft(comb.weights.transpose(1, 2, 0), axis=-1)


def apply_time(comb: CombinerWeights, q_time: np.ndarray) -> np.ndarray:
    """Cyclic convolution with the impulse response; agrees with apply_freq
    through the unitary DFT to floating-point precision."""
    w_time = impulse_response(comb)                  # (K, M, N)
    w_f = np.fft.fft(w_time, axis=-1)
    q_f = np.fft.fft(q_time, axis=-1)                # (M, N)
    return np.fft.ifft(np.einsum("kmn,mn->kn", w_f, q_f), axis=-1)


def symbol_estimates(comb: CombinerWeights, q_block: np.ndarray, mode: str) -> np.ndarray:
    """Symbol estimates from the quantized time block: time-domain signal
    estimate for single-carrier, per-tone estimate for OFDM."""
    from .config import OFDM
    from .waveform import unitary_dft, unitary_idft
    xhat_f = apply_freq(comb, unitary_dft(q_block, axis=-1))
    return xhat_f if mode == OFDM else unitary_idft(xhat_f, axis=-1)


def energy_concentration(comb: CombinerWeights, window: int) -> np.ndarray:
    """Largest fraction of impulse-response energy in `window` consecutive
    cyclic taps, per user (pooled over antennas).  MRC concentrates all of it
    in L taps (time-reversed conjugate channel); ZFC in a little more."""
    w_time = impulse_response(comb)
    energy = np.sum(np.abs(w_time) ** 2, axis=1)  # (K, N)
    total = energy.sum(axis=-1)
    n = energy.shape[-1]
    window = min(window, n)
    ext = np.concatenate([energy, energy[:, : window - 1]], axis=-1)
    csum = np.cumsum(np.concatenate([np.zeros((energy.shape[0], 1)), ext], axis=-1), axis=-1)
    sums = csum[:, window:] - csum[:, :-window]
    return sums.max(axis=-1) / total
