"""Achievable-rate estimation from Monte-Carlo moments and every closed form.

The empirical rate per user is the Gaussian-input mutual-information lower
bound evaluated from second moments pooled over tones, symbols, and channel
realizations:

    R = log2(1 + |a|^2 E|x|^2 / E|xhat - a x|^2),   a = E[x* xhat] / E|x|^2.

The residual power is accumulated directly as a regression sum of squares
(with the exact parallel-merge identity), not as the difference of two large
moments: the difference form loses all precision precisely in the
interference-free cases used as sanity oracles, and its sign is then random.

Closed forms: for IID Rayleigh taps and many of them, the rate tends to

    R' = log2(1 + c beta P G / (sum_k' beta P (1 - c (1 - I)) + N0 + Q'))

with combiner gain G and interference level I (G = M, I = 1 for MRC;
G = M - K, I = 0 for ZFC; estimated numerically for RZFC).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import draw_channel, freq_response
from .chest import analytic_quality, quality_ratio
from .combine import _raw_weights, row_energy
from .config import MRC, RZFC, ZFC, SystemConfig
from .linksim import rel_distortion_limit
from .waveform import unitary_dft


class DegenerateMomentsError(ArithmeticError):
    """Residual moment is not positive (possible at tiny sample sizes);
    flagged rather than clamped, because clamping biases sweeps upward."""


class MomentAccumulator:
    """Per-user cross-moment accumulator with mergeable partial states.

    Merging is associative and commutative in exact arithmetic; callers that
    need bit-identical output across worker counts should merge partials in a
    fixed (e.g. trial-index) order.
    """

    def __init__(self, num_users: int):
        self.num_users = num_users
        self.nsamples = 0
        self.ntrials = 0
        self.sxx = np.zeros(num_users)
        self.syy = np.zeros(num_users)
        self.g = np.zeros(num_users, dtype=complex)
        self.coef = np.zeros(num_users, dtype=complex)
        self.rss = np.zeros(num_users)
        self.trials: list = []  # (nsamples, sxx, g, syy) per trial

    @staticmethod
    def trial_stats(x: np.ndarray, xhat: np.ndarray):
        """Per-trial regression statistics of (K, N) symbols and estimates."""
        n = x.shape[-1]
        sxx = np.sum(np.abs(x) ** 2, axis=-1)
        syy = np.sum(np.abs(xhat) ** 2, axis=-1)
        g = np.sum(np.conj(x) * xhat, axis=-1)
        coef = g / sxx
        rss = np.sum(np.abs(xhat - coef[:, None] * x) ** 2, axis=-1)
        return n, sxx, g, syy, coef, rss

    def ingest(self, stats) -> None:
        n, sxx, g, syy, coef, rss = stats
        self._fold(n, sxx, coef, rss)
        self.nsamples += n
        self.ntrials += 1
        self.sxx += sxx
        self.syy += syy
        self.g += g
        self.trials.append((n, sxx, g, syy))

    def add_trial(self, x: np.ndarray, xhat: np.ndarray) -> None:
        """Accumulate one trial's (K, N) symbols and symbol estimates."""
        self.ingest(self.trial_stats(x, xhat))

    def _fold(self, n_b, sxx_b, coef_b, rss_b):
        if self.nsamples == 0:
            self.coef = coef_b.copy()
            self.rss = rss_b.copy()
            return
        sxx_tot = self.sxx + sxx_b
        coef = (self.coef * self.sxx + coef_b * sxx_b) / sxx_tot
        self.rss = (self.rss + rss_b
                    + np.abs(self.coef - coef) ** 2 * self.sxx
                    + np.abs(coef_b - coef) ** 2 * sxx_b)
        self.coef = coef

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if other.nsamples:
            self._fold(other.nsamples, other.sxx, other.coef, other.rss)
            self.nsamples += other.nsamples
            self.ntrials += other.ntrials
            self.sxx += other.sxx
            self.syy += other.syy
            self.g += other.g
            self.trials.extend(other.trials)
        return self

    def sinr(self) -> np.ndarray:
        if self.ntrials < 1:
            raise DegenerateMomentsError("no trials accumulated")
        if np.any(self.rss <= 0):
            raise DegenerateMomentsError("residual power is not positive")
        return np.abs(self.coef) ** 2 * self.sxx / self.rss

    def rate(self) -> np.ndarray:
        return np.log2(1.0 + self.sinr())

    @staticmethod
    def _rate_from_moments(sxx, g, syy):
        """Moment-difference form; fine in noisy regimes, NaN where the
        residual cancels to nothing (measured-perfect estimates)."""
        resid = syy - np.abs(g) ** 2 / sxx
        with np.errstate(divide="ignore", invalid="ignore"):
            rate = np.log2(1.0 + (np.abs(g) ** 2 / sxx) / resid)
        return np.where(resid > 0, rate, np.nan)

    def jackknife_se(self) -> np.ndarray:
        """Leave-one-trial-out standard error of the per-user rate.

        NaN where the residual moment is below measurement precision (there
        the rate is a floating-point floor, not a statistical estimate).
        """
        t = len(self.trials)
        if t < 2:
            return np.full(self.num_users, np.nan)
        loo = np.empty((t, self.num_users))
        for i, (n, sxx, g, syy) in enumerate(self.trials):
            loo[i] = self._rate_from_moments(self.sxx - sxx, self.g - g, self.syy - syy)
        return np.sqrt((t - 1) / t * np.sum((loo - loo.mean(axis=0)) ** 2, axis=0))


@dataclass(frozen=True)
class RateReport:
    rate: np.ndarray               # (K,) empirical bpcu
    stderr: np.ndarray             # (K,) jackknife standard errors
    trials: int
    rate_limit: np.ndarray | None = None   # (K,) closed-form wideband limit
    sinr_terms: dict | None = None


def report(acc: MomentAccumulator, rate_limit=None, sinr_terms=None) -> RateReport:
    return RateReport(rate=acc.rate(), stderr=acc.jackknife_se(), trials=acc.ntrials,
                      rate_limit=rate_limit, sinr_terms=sinr_terms)


def moment_domain_gap(x_time: np.ndarray, xhat_time: np.ndarray) -> float:
    """|pooled cross-moment in time - pooled cross-moment in frequency|.

    Zero to rounding for any signals, by unitarity; a cheap guard against
    mismatched DFT conventions between the two symbol-estimate paths.
    """
    t = np.vdot(x_time, xhat_time)
    f = np.vdot(unitary_dft(x_time, axis=-1), unitary_dft(xhat_time, axis=-1))
    return float(abs(t - f)) / x_time.shape[-1]


def combiner_params(config: SystemConfig, kind: str | None = None,
                    gain_param=None, interference=None,
                    antennas: float | None = None):
    """(G_k, I_kk') characterizing the combiner: analytic for MRC/ZFC.

    antennas overrides M in the analytic gains (useful for antenna sweeps of
    the closed forms without rebuilding configs).
    """
    k = config.num_users
    kind = config.combiner if kind is None else kind
    if gain_param is not None and interference is not None:
        return np.broadcast_to(np.asarray(gain_param, dtype=float), (k,)), \
            np.asarray(interference, dtype=float)
    m = float(config.antennas) if antennas is None else float(antennas)
    if kind == MRC:
        return np.full(k, m), np.ones((k, k))
    if kind == ZFC:
        return np.full(k, m - k), np.zeros((k, k))
    raise ValueError(f"{kind} needs numerically estimated (G, I); "
                     "see characteristic_params_empirical")


def sinr_terms(config: SystemConfig, quality: np.ndarray, kind: str | None = None,
               gain_param=None, interference=None, antennas: float | None = None) -> dict:
    """Numerator and denominator pieces of the wideband SINR, per user."""
    gain, inter = combiner_params(config, kind, gain_param, interference, antennas)
    rx = np.asarray(config.rx_powers)
    c = np.asarray(quality)
    signal = c * rx * gain
    interference_term = (rx * (1.0 - c * (1.0 - inter))).sum(axis=1)
    distortion = rel_distortion_limit(config)
    return {
        "signal": signal,
        "interference": interference_term,
        "noise": config.noise_floor,
        "distortion": distortion,
        "denominator": interference_term + config.noise_floor + distortion,
    }


def closed_form_rate(config: SystemConfig, quality: np.ndarray,
                     kind: str | None = None, gain_param=None, interference=None,
                     antennas: float | None = None) -> np.ndarray:
    """Wideband-limit rate per user, log2(1 + SINR)."""
    terms = sinr_terms(config, quality, kind, gain_param, interference, antennas)
    return np.log2(1.0 + terms["signal"] / terms["denominator"])


def characteristic_params_empirical(config: SystemConfig, kind: str | None = None,
                                    reg: float = 0.0, trials: int = 50,
                                    rng: np.random.Generator | None = None,
                                    tones: int | None = None):
    """Monte-Carlo (G_k, I_kk') for an arbitrary combiner.

    Pure combiner properties: perfect CSI, no noise, no quantizer.  The
    transmit symbols integrate out exactly, so only channel draws are needed.
    """
    kind = config.combiner if kind is None else kind
    if kind == RZFC and reg == 0.0 and config.rzfc_lambda is not None:
        reg = config.rzfc_lambda
    rng = np.random.default_rng(config.seed) if rng is None else rng
    n = tones if tones is not None else min(config.data_len, 64)
    n = max(n, config.num_taps)  # the response needs at least L tones
    k = config.num_users
    sum_a = np.zeros((k, k), dtype=complex)
    sum_a2 = np.zeros((k, k))
    sum_rowe = np.zeros(k)
    count = 0
    for _ in range(trials):
        taps = draw_channel(config, rng)
        h = freq_response(taps, n)                       # (M, K, N)
        raw = _raw_weights(h, kind, reg, 1e12)           # (N, K, M)
        a = np.einsum("nkm,mjn->nkj", raw, h)            # (N, K, K) combiner x channel
        sum_a += a.sum(axis=0)
        sum_a2 += (np.abs(a) ** 2).sum(axis=0)
        sum_rowe += row_energy(raw).sum(axis=0)
        count += n
    mean_a = sum_a / count
    mean_a2 = sum_a2 / count
    rowe = sum_rowe / count
    gain = np.abs(np.diagonal(mean_a)) ** 2 / rowe
    inter = (mean_a2 - np.abs(mean_a) ** 2) / rowe[:, None]
    return gain, inter


def zfc_rate_ceiling(config: SystemConfig) -> float:
    """High-SNR limit of the quantized ZFC rate (equal powers, uniform profile).

    With estimation quality c -> mu/(mu + pi/2 - 1) as P/N0 grows, the SINR of
    the quantized zero-forcing system saturates at

        2 mu (M - K) / (K (pi/2 - 1) (2 mu + pi))
        = N_p (M - K) / ((pi/2 - 1) K (N_p + (pi/2) K L)),

    while the unquantized ZFC rate grows without bound.
    """
    m, k = config.antennas, config.num_users
    n_p, num_taps = config.pilot_len, config.num_taps
    sinr = n_p * (m - k) / ((math.pi / 2 - 1) * k * (n_p + (math.pi / 2) * k * num_taps))
    return math.log2(1.0 + sinr)


def sinr_loss_factor(delta) -> np.ndarray:
    """Quantized-vs-unquantized MRC SINR ratio 2 / (pi * Delta(mu0, mu_q)).

    2/pi (about -2 dB) at equal estimation quality; 4/pi^2 (about -4 dB) when
    both systems use mu = 1 with equal powers and a uniform profile.
    """
    return 2.0 / (math.pi * np.asarray(delta))


def rate_baselines(config: SystemConfig, mu_unquantized: float = 1.0) -> dict:
    """All closed-form reference rates for the config's scenario.

    The ceiling and the loss factor assume equal received powers and a
    uniform profile (where the closed forms require them).
    """
    c_q = analytic_quality(config, quantized=True)
    c_0 = analytic_quality(config, quantized=False)
    quantized = replace(config, quantized=True)
    unquantized = replace(config, quantized=False)
    delta = quality_ratio(mu_unquantized, config.pilot_excess_factor, config)
    return {
        "mrc_quantized": closed_form_rate(quantized, c_q, MRC),
        "zfc_quantized": closed_form_rate(quantized, c_q, ZFC),
        "mrc_unquantized": closed_form_rate(unquantized, c_0, MRC),
        "zfc_unquantized": closed_form_rate(unquantized, c_0, ZFC),
        "zfc_ceiling": zfc_rate_ceiling(config),
        "loss_factor": sinr_loss_factor(delta),
    }


def antenna_cost_factor(config: SystemConfig, kind: str, m_ref: int,
                        user: int = 0, tol: float = 1.0) -> float:
    """How many times more antennas the quantized system needs for the rate
    the unquantized system achieves with m_ref antennas (same pilot length).

    Bisection on the antenna count in the closed forms, to within one antenna.
    """
    c_q = analytic_quality(config, quantized=True)
    c_0 = analytic_quality(config, quantized=False)
    quantized = replace(config, quantized=True)
    unquantized = replace(config, quantized=False)
    target = closed_form_rate(unquantized, c_0, kind, antennas=float(m_ref))[user]

    def gap(m):
        return closed_form_rate(quantized, c_q, kind, antennas=m)[user] - target

    lo = float(config.num_users + 1)
    hi = float(max(m_ref, config.num_users + 2))
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e9:
            raise ArithmeticError("quantized system cannot reach the target rate")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / m_ref
