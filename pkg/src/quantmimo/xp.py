"""Experiment harness: single link trials, figure sweeps, CSV/manifest output.

Every Monte-Carlo trial draws from a substream keyed by (seed, point, trial,
role), so results are independent of execution order and worker count.  To
keep reruns bit-identical, workers return per-trial moment tuples and the
parent folds them in trial order.

Per grid point, two quantities are precomputed before the trial fan-out:
the cached E[sqrt(P_rx)] behind the Bussgang scalar, and the ensemble
row-energy normalizer alpha of the combiner (see combine.ensemble_alpha for
why alpha must not vary per realization).
"""
from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import chest, combine, linksim, rates, waveform
from .channel import draw_channel, freq_response, substream
from .config import (MRC, OFDM, RZFC, SINGLE_CARRIER, ZFC, SystemConfig,
                     config_to_dict, default_rzfc_lambda, equal_snr_config,
                     lin_to_db, mean_rx_power, validate, validation_errors)

ROLE_CHANNEL = 0
ROLE_PILOT_PHASE = 1
ROLE_PILOT_NOISE = 2
ROLE_DATA = 3
ROLE_DATA_NOISE = 4
_ALPHA_TRIAL_BASE = 1_000_000  # alpha pre-pass trials live in their own range

FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8")


def link_stats(config: SystemConfig, constellation: str = "gaussian",
               phase_mode: str = waveform.RANDOM_PHASES) -> dict:
    """Quantizer statistics for the pilot and data blocks of one scenario."""
    return {
        "data": linksim.quantizer_stats(config, "data", constellation),
        "pilot": linksim.quantizer_stats(config, "pilot", phase_mode=phase_mode),
    }


def resolve_reg(config: SystemConfig) -> float:
    if config.combiner != RZFC:
        return 0.0
    if config.rzfc_lambda is not None:
        return config.rzfc_lambda
    return default_rzfc_lambda(config, linksim.rel_distortion_limit(config))


def run_link_trial(config: SystemConfig, point: int, trial: int, stats: dict,
                   *, csi: str = "perfect", constellation: str = "gaussian",
                   phase_mode: str = waveform.RANDOM_PHASES,
                   alpha: np.ndarray | None = None, detail: bool = False):
    """One training + data block through the full link.

    Returns (x_freq, xhat_freq) of shape (K, N_d), plus a detail dict of the
    internals when detail=True (for audits and scatter exports).
    """
    num_taps = config.num_taps
    h = draw_channel(config, substream(config.seed, point, trial, ROLE_CHANNEL))
    est = None
    pilots = None
    if csi == "estimated":
        pilots = waveform.make_pilots(
            config.num_users, config.pilot_len,
            substream(config.seed, point, trial, ROLE_PILOT_PHASE), phase_mode)
        rx_p = linksim.receive(
            h, waveform.add_cyclic_prefix(pilots.time_pilots, num_taps), config,
            substream(config.seed, point, trial, ROLE_PILOT_NOISE),
            gain=stats["pilot"].gain)
        q_p = waveform.strip_cyclic_prefix(rx_p.quantized, num_taps)
        est = chest.estimate_channel(
            waveform.unitary_dft(q_p, axis=-1), pilots, config, stats["pilot"],
            true_taps=h if detail else None)
        h_freq = est.freq
    elif csi == "perfect":
        h_freq = freq_response(h, config.data_len)
    else:
        raise ValueError(f"unknown csi mode {csi!r}")
    comb = combine.build_combiner(h_freq, config.combiner, resolve_reg(config),
                                  alpha=alpha)
    data = waveform.draw_data_block(
        config, substream(config.seed, point, trial, ROLE_DATA), constellation)
    rx = linksim.receive(
        h, waveform.add_cyclic_prefix(data.time_signal, num_taps), config,
        substream(config.seed, point, trial, ROLE_DATA_NOISE),
        gain=stats["data"].gain)
    q_block = waveform.strip_cyclic_prefix(rx.quantized, num_taps)
    q_freq = waveform.unitary_dft(q_block, axis=-1)
    xhat_freq = combine.apply_freq(comb, q_freq)
    x_freq = waveform.unitary_dft(data.time_signal, axis=-1)
    if not detail:
        return x_freq, xhat_freq, None
    y_block = waveform.strip_cyclic_prefix(rx.analog, num_taps)
    ybar_block = waveform.strip_cyclic_prefix(rx.noisefree, num_taps)
    return x_freq, xhat_freq, {
        "taps": h, "estimate": est, "combiner": comb, "data": data,
        "pilots": pilots, "rx": rx, "q_block": q_block, "q_freq": q_freq,
        "y_block": y_block, "ybar_block": ybar_block,
        "y_freq": waveform.unitary_dft(y_block, axis=-1),
        "z_freq": waveform.unitary_dft(y_block - ybar_block, axis=-1),
    }


def estimate_once(config: SystemConfig, point: int, trial: int, stats: dict,
                  phase_mode: str = waveform.RANDOM_PHASES,
                  true_mse: bool = False):
    """Run just the training phase of one trial; returns the ChannelEstimate."""
    h = draw_channel(config, substream(config.seed, point, trial, ROLE_CHANNEL))
    pilots = waveform.make_pilots(
        config.num_users, config.pilot_len,
        substream(config.seed, point, trial, ROLE_PILOT_PHASE), phase_mode)
    rx_p = linksim.receive(
        h, waveform.add_cyclic_prefix(pilots.time_pilots, config.num_taps),
        config, substream(config.seed, point, trial, ROLE_PILOT_NOISE),
        gain=stats["pilot"].gain)
    q_p = waveform.strip_cyclic_prefix(rx_p.quantized, config.num_taps)
    return chest.estimate_channel(waveform.unitary_dft(q_p, axis=-1), pilots,
                                  config, stats["pilot"],
                                  true_taps=h if true_mse else None)


def point_alpha(config: SystemConfig, point: int, stats: dict, *,
                csi: str = "perfect",
                phase_mode: str = waveform.RANDOM_PHASES,
                trials: int = 64) -> np.ndarray:
    """Ensemble combiner normalizer for one grid point.

    Draws the channel (or the channel estimate, for estimated CSI) from the
    same distribution the trials will see.
    """
    def drawer(t):
        idx = _ALPHA_TRIAL_BASE + t
        if csi == "perfect":
            h = draw_channel(config, substream(config.seed, point, idx, ROLE_CHANNEL))
            return freq_response(h, config.data_len)
        return estimate_once(config, point, idx, stats, phase_mode).freq

    return combine.ensemble_alpha(drawer, config.combiner, resolve_reg(config), trials)


def _trial_batch(config, point, trial_indices, stats, csi, constellation,
                 phase_mode, alpha):
    """Worker payload: per-trial regression stats, in index order."""
    out = []
    for t in trial_indices:
        try:
            x, xhat, _ = run_link_trial(config, point, t, stats, csi=csi,
                                        constellation=constellation,
                                        phase_mode=phase_mode, alpha=alpha)
        except combine.SingularGramError:
            out.append((t, None))
            continue
        out.append((t, rates.MomentAccumulator.trial_stats(x, xhat)))
    return out


def simulate_rate(config: SystemConfig, trials: int, *, point: int = 0,
                  csi: str = "perfect", constellation: str = "gaussian",
                  phase_mode: str = waveform.RANDOM_PHASES,
                  alpha_trials: int = 64, workers: int = 1):
    """Monte-Carlo per-user rate for one scenario.

    Returns (RateReport, MomentAccumulator, dropped_trials).
    """
    stats = link_stats(config, constellation, phase_mode)
    alpha = point_alpha(config, point, stats, csi=csi, phase_mode=phase_mode,
                        trials=alpha_trials)
    indices = list(range(trials))
    results = []
    if workers <= 1:
        results = _trial_batch(config, point, indices, stats, csi, constellation,
                               phase_mode, alpha)
    else:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_trial_batch, config, point, chunk, stats,
                                   csi, constellation, phase_mode, alpha)
                       for chunk in chunks if chunk]
            for fut in futures:
                results.extend(fut.result())
    results.sort(key=lambda item: item[0])
    acc = rates.MomentAccumulator(config.num_users)
    dropped = 0
    for _, stats_tuple in results:
        if stats_tuple is None:
            dropped += 1
        else:
            acc.ingest(stats_tuple)
    return rates.report(acc), acc, dropped


def compare_waveforms(config: SystemConfig, trials: int, *, point: int = 0,
                      csi: str = "perfect", constellation: str = "gaussian",
                      workers: int = 1) -> dict:
    """Single-carrier vs OFDM on the same channel and noise realizations.

    The substreams depend only on (seed, point, trial, role), so both modes
    see identical channels, noise, and symbol draws; only the symbol-to-time
    mapping differs.
    """
    out = {}
    for mode in (SINGLE_CARRIER, OFDM):
        cfg = validate(replace(config, waveform=mode))
        rep, acc, _ = simulate_rate(cfg, trials, point=point, csi=csi,
                                    constellation=constellation, workers=workers)
        out[mode] = rep
    sc, of = out[SINGLE_CARRIER], out[OFDM]
    out["rate_gap"] = sc.rate - of.rate
    out["gap_se"] = np.sqrt(sc.stderr ** 2 + of.stderr ** 2)
    return out


def run_decomposition_audit(config: SystemConfig, trials: int, *, point: int = 0,
                            alpha_trials: int = 128) -> dict:
    """Empirical check that the symbol-estimate components are uncorrelated.

    Components per user k: the K combined-signal terms (one per transmit
    user), the estimation-error term, the thermal-noise term, and the
    quantization term.  Returns their correlation matrix (pooled over users),
    component variances, and the worst reconstruction gap of the identity
    xhat = rho * (signal terms + u' + z') + e'.
    """
    stats = link_stats(config)
    alpha = point_alpha(config, point, stats, csi="estimated", trials=alpha_trials)
    k = config.num_users
    ncomp = k + 3
    rho = stats["data"].gain
    rx_amp = np.sqrt(np.asarray(config.rx_powers))
    cov = np.zeros((ncomp, ncomp), dtype=complex)
    ex_cross = 0.0 + 0.0j
    ex_xx = ex_ee = 0.0
    nsamp = 0
    identity_gap = 0.0
    quality = None
    for t in range(trials):
        x, xhat, det = run_link_trial(config, point, t, stats, csi="estimated",
                                      alpha=alpha, detail=True)
        est, comb = det["estimate"], det["combiner"]
        quality = est.per_user_quality
        w = comb.weights                                 # (N, K, M)
        h_true = freq_response(det["taps"], config.data_len)
        eps = h_true - est.freq                          # (M, K, N)
        err_freq = det["q_freq"] - rho * det["y_freq"]
        # per-user combined pieces of the symbol estimate
        wh = np.einsum("nkm,mjn->knj", w, est.freq)      # (K, N, K)
        sig = wh.transpose(0, 2, 1) * (x / np.sqrt(quality)[:, None])[None]  # (K, K, N)
        u_m = np.einsum("j,mjn,jn->mn", rx_amp, eps, x)
        u_term = np.einsum("nkm,mn->kn", w, u_m)
        z_term = np.einsum("nkm,mn->kn", w, det["z_freq"])
        e_term = np.einsum("nkm,mn->kn", w, err_freq)
        comps = np.concatenate(
            [sig, u_term[:, None, :], z_term[:, None, :], e_term[:, None, :]],
            axis=1)                                      # (K, K+3, N)
        # exact reassembly: xhat = rho (sum_j sqrt(c_j b_j P_j) sig_j + u + z) + e
        scale = np.concatenate([rho * np.sqrt(quality) * rx_amp, [rho, rho, 1.0]])
        rebuilt = np.einsum("c,kcn->kn", scale, comps)
        identity_gap = max(identity_gap, float(np.max(np.abs(rebuilt - xhat))))
        for kk in range(k):
            c_k = comps[kk]
            cov += c_k @ c_k.conj().T
            ex_cross += np.vdot(x[kk], c_k[-1])
            ex_xx += float(np.sum(np.abs(x[kk]) ** 2))
            ex_ee += float(np.sum(np.abs(c_k[-1]) ** 2))
            nsamp += c_k.shape[-1]
    d = np.sqrt(np.real(np.diag(cov)))
    corr = cov / np.outer(d, d)
    return {
        "correlation": corr,
        "identity_gap": identity_gap,
        "var_estimation_term": float(np.real(cov[k, k])) / nsamp,
        "var_noise_term": float(np.real(cov[k + 1, k + 1])) / nsamp,
        "corr_err_tx": abs(ex_cross) / math.sqrt(ex_xx * ex_ee),
        "expected_var_estimation": float(np.sum(np.asarray(config.rx_powers)
                                                * (1.0 - quality))),
        "expected_var_noise": config.noise_floor,
        "samples": nsamp,
        "quality": quality,
    }


# ---------------------------------------------------------------------------
# figure sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    """One reproducible figure run: which sweep, how many trials per point."""

    figure: str
    seed: int = 1
    trials: int = 400
    grid: tuple = ()      # empty means the figure's default grid
    data_len: int = 512

    def resolved_grid(self):
        return self.grid if self.grid else DEFAULT_GRIDS[self.figure]


DEFAULT_GRIDS = {
    "fig2": (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 40),
    "fig3": (64, 1),
    "fig4": tuple(range(1, 16)),
    "fig5": (1, 2, 3, 4, 5, 6, 10, 15, 20, 30),
    "fig6": (8, 16, 32, 64, 128, 256, 512, 1024),
    "fig7": (8, 16, 32, 64, 128, 256, 512, 1024),
    "fig8": tuple(range(-20, 11)),
}

# Monte-Carlo markers above this antenna count are left to the closed forms.
EMPIRICAL_ANTENNA_CAP = 256

RATE_FIELDS = ("sweep_var", "value", "user", "combiner", "quantized", "waveform",
               "rate_bpcu", "rate_limit_bpcu", "stderr", "trials")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path, fieldnames, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(fieldnames) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row.get(name)) for name in fieldnames) + "\n")


def config_digest(configs) -> str:
    blob = json.dumps([config_to_dict(c) for c in configs], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _rate_rows(report, config, sweep_var, value, limit, csi_trials):
    rows = []
    for user in range(config.num_users):
        rows.append({
            "sweep_var": sweep_var, "value": value, "user": user,
            "combiner": config.combiner, "quantized": config.quantized,
            "waveform": config.waveform,
            "rate_bpcu": float(report.rate[user]) if report is not None else None,
            "rate_limit_bpcu": float(limit[user]),
            "stderr": float(report.stderr[user]) if report is not None else None,
            "trials": csi_trials,
        })
    return rows


def _run_fig2(spec: SweepSpec, workers: int):
    fields = ("mu", "K", "snr_db", "quantized", "c_db_analytic",
              "c_db_empirical", "stderr")
    series = ((5, 10.0), (10, 0.0), (5, 0.0), (5, -10.0))
    rows, configs = [], []
    point = 0
    for num_users, snr_db in series:
        for mu in spec.resolved_grid():
            cfg = equal_snr_config(8, num_users, 8, snr_db, pilot_excess=int(mu),
                                   data_len=64, seed=spec.seed)
            configs.append(cfg)
            for quantized in (True, False):
                cfg_q = validate(replace(cfg, quantized=quantized))
                analytic = float(chest.analytic_quality(cfg_q)[0])
                emp, err = _measure_quality(cfg_q, spec.trials, point)
                rows.append({
                    "mu": mu, "K": num_users, "snr_db": snr_db,
                    "quantized": quantized,
                    "c_db_analytic": lin_to_db(analytic),
                    "c_db_empirical": lin_to_db(emp),
                    "stderr": err,
                })
                point += 1
    return fields, rows, configs


def _measure_quality(config, trials, point, phase_mode=waveform.RANDOM_PHASES):
    """Empirical estimation quality: mean |h^~|^2 pooled over equal users."""
    stats = {"pilot": linksim.quantizer_stats(config, "pilot", phase_mode=phase_mode)}
    vals = np.empty(trials)
    for t in range(trials):
        est = estimate_once(config, point, t, stats, phase_mode)
        vals[t] = float(np.mean(np.abs(est.freq) ** 2))
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(trials))


def _run_fig3(spec: SweepSpec, workers: int):
    fields = ("user", "symbol_index", "re", "im", "mode", "L", "K")
    rows, configs = [], []
    num_users = 5
    for point, num_taps in enumerate(spec.resolved_grid()):
        for mode in (SINGLE_CARRIER, OFDM):
            cfg = equal_snr_config(128, num_users, num_taps, 0.0, noise_floor=1.0,
                                   data_len=spec.data_len, combiner=ZFC,
                                   waveform=mode, seed=spec.seed)
            # quantization is the only impairment: no thermal noise, true CSI
            cfg = validate(replace(cfg, noise_floor=0.0,
                                   users=tuple(replace(u, beta=1.0) for u in cfg.users)))
            configs.append(cfg)
            stats = link_stats(cfg, constellation="qpsk")
            _, _, det = run_link_trial(cfg, point, 0, stats, csi="perfect",
                                       constellation="qpsk", detail=True)
            shat = combine.symbol_estimates(det["combiner"], det["q_block"], mode)
            for user in range(num_users):
                for n in range(min(spec.data_len, 400)):
                    rows.append({"user": user, "symbol_index": n,
                                 "re": float(shat[user, n].real),
                                 "im": float(shat[user, n].imag),
                                 "mode": mode, "L": num_taps, "K": num_users})
    return fields, rows, configs


def _run_fig4(spec: SweepSpec, workers: int):
    fields = ("mu_q", "combiner", "K", "snr_db", "antennas", "ratio_pct",
              "rate_q_bpcu", "rate_0_bpcu")
    series = ((MRC, 5, -5.0), (ZFC, 5, -5.0), (MRC, 5, 0.0), (ZFC, 5, 0.0),
              (MRC, 30, -10.0), (ZFC, 30, -10.0), (MRC, 30, 10.0))
    rows, configs = [], []
    for kind, num_users, snr_db in series:
        cfg = equal_snr_config(128, num_users, 20, snr_db, combiner=kind,
                               data_len=spec.data_len, seed=spec.seed)
        configs.append(cfg)
        c0 = chest.analytic_quality(cfg, pilot_excess=1.0, quantized=False)
        r0 = rates.closed_form_rate(validate(replace(cfg, quantized=False)), c0, kind)
        for mu_q in spec.resolved_grid():
            cq = chest.analytic_quality(cfg, pilot_excess=float(mu_q), quantized=True)
            rq = rates.closed_form_rate(cfg, cq, kind)
            rows.append({"mu_q": mu_q, "combiner": kind, "K": num_users,
                         "snr_db": snr_db, "antennas": 128,
                         "ratio_pct": 100.0 * float(rq[0] / r0[0]),
                         "rate_q_bpcu": float(rq[0]), "rate_0_bpcu": float(r0[0])})
    return fields, rows, configs


def _run_fig5(spec: SweepSpec, workers: int):
    fields = RATE_FIELDS
    rows, configs = [], []
    point = 0
    for num_users in (5, 30):
        for kind in (MRC, ZFC):
            for num_taps in spec.resolved_grid():
                cfg = equal_snr_config(128, num_users, num_taps, 10.0,
                                       combiner=kind, data_len=spec.data_len,
                                       seed=spec.seed)
                configs.append(cfg)
                ones = np.ones(num_users)
                limit_q = rates.closed_form_rate(cfg, ones, kind)
                limit_0 = rates.closed_form_rate(
                    validate(replace(cfg, quantized=False)), ones, kind)
                rep, _, _ = simulate_rate(cfg, spec.trials, point=point,
                                          csi="perfect", workers=workers)
                rows.extend(_rate_rows(rep, cfg, "num_taps", num_taps, limit_q,
                                       spec.trials))
                rows.extend(_rate_rows(None, replace(cfg, quantized=False),
                                       "num_taps", num_taps, limit_0, 0))
                point += 1
    return fields, rows, configs


def _antenna_sweep(spec: SweepSpec, workers: int, snr_db: float,
                   weak_user: bool = False):
    """Shared engine of the rate-versus-antennas figures (estimated CSI)."""
    fields = RATE_FIELDS + ("scenario",)
    rows, configs = [], []
    num_users, num_taps = 5, 20
    scenario = "weak" if weak_user else "equal"
    point = 0
    for kind in (MRC, ZFC, RZFC):
        quantized_modes = (True,) if kind == RZFC else (True, False)
        for quantized in quantized_modes:
            for antennas in spec.resolved_grid():
                cfg = equal_snr_config(int(antennas), num_users, num_taps, snr_db,
                                       combiner=kind, data_len=spec.data_len,
                                       quantized=quantized, seed=spec.seed)
                if weak_user:
                    users = (replace(cfg.users[0], beta=cfg.users[0].beta / 10.0),
                             ) + cfg.users[1:]
                    cfg = validate(replace(cfg, users=users))
                configs.append(cfg)
                quality = chest.analytic_quality(cfg)
                if kind == RZFC:
                    gain_p, inter = rates.characteristic_params_empirical(
                        cfg, trials=32, tones=16,
                        rng=substream(cfg.seed, point, 777))
                    limit = rates.closed_form_rate(cfg, quality, kind,
                                                   gain_param=gain_p,
                                                   interference=inter)
                else:
                    limit = rates.closed_form_rate(cfg, quality, kind)
                rep = None
                if spec.trials > 0 and antennas <= EMPIRICAL_ANTENNA_CAP:
                    rep, _, _ = simulate_rate(cfg, spec.trials, point=point,
                                              csi="estimated", workers=workers)
                for row in _rate_rows(rep, cfg, "antennas", antennas, limit,
                                      spec.trials):
                    row["scenario"] = scenario
                    rows.append(row)
                point += 1
    return fields, rows, configs


def _run_fig6(spec: SweepSpec, workers: int):
    return _antenna_sweep(spec, workers, snr_db=10.0)


def _run_fig7(spec: SweepSpec, workers: int):
    f1, rows_eq, cfg_eq = _antenna_sweep(spec, workers, snr_db=-10.0)
    f2, rows_weak, cfg_weak = _antenna_sweep(spec, workers, snr_db=0.0,
                                             weak_user=True)
    return f1, rows_eq + rows_weak, cfg_eq + cfg_weak


def _run_fig8(spec: SweepSpec, workers: int):
    fields = RATE_FIELDS + ("ceiling_bpcu",)
    rows, configs = [], []
    marker_grid = (-15.0, -10.0, -5.0, 0.0, 7.0)
    point = 0
    for kind in (MRC, ZFC):
        for quantized in (True, False):
            for snr_db in spec.resolved_grid():
                cfg = equal_snr_config(128, 5, 20, float(snr_db), combiner=kind,
                                       data_len=spec.data_len, quantized=quantized,
                                       seed=spec.seed)
                configs.append(cfg)
                quality = chest.analytic_quality(cfg)
                limit = rates.closed_form_rate(cfg, quality, kind)
                ceiling = rates.zfc_rate_ceiling(cfg)
                rep = None
                if spec.trials > 0 and float(snr_db) in marker_grid:
                    rep, _, _ = simulate_rate(cfg, spec.trials, point=point,
                                              csi="estimated", workers=workers)
                for row in _rate_rows(rep, cfg, "snr_db", float(snr_db), limit,
                                      spec.trials):
                    row["ceiling_bpcu"] = ceiling
                    rows.append(row)
                point += 1
    return fields, rows, configs


_RUNNERS = {"fig2": _run_fig2, "fig3": _run_fig3, "fig4": _run_fig4,
            "fig5": _run_fig5, "fig6": _run_fig6, "fig7": _run_fig7,
            "fig8": _run_fig8}


def run_sweep(spec: SweepSpec, workers: int = 1):
    """Run one figure sweep; returns (fieldnames, rows, manifest)."""
    if spec.figure not in _RUNNERS:
        raise ValueError(f"unknown figure {spec.figure!r}")
    start = time.time()
    fields, rows, configs = _RUNNERS[spec.figure](spec, workers)
    manifest = {
        "figure": spec.figure,
        "seed": spec.seed,
        "trials": spec.trials,
        "grid": list(spec.resolved_grid()),
        "config_hash": config_digest(configs),
        "rows": len(rows),
        "elapsed_s": round(time.time() - start, 3),
        "version": _version(),
        "points": [config_to_dict(c) for c in configs],
    }
    return fields, rows, manifest


def _version() -> str:
    try:
        from importlib.metadata import version
        return version("quantmimo")
    except Exception:
        return "unknown"


def selftest() -> tuple:
    """Deterministic closed-form golden checks; returns (all_ok, report lines)."""
    checks = []
    cfg = equal_snr_config(128, 5, 20, 10.0, combiner=MRC, data_len=512)
    c_q = float(chest.analytic_quality(cfg, quantized=True)[0])
    c_0 = float(chest.analytic_quality(cfg, quantized=False)[0])
    checks.append(("quantized estimation quality (mu=1, K=5, 10 dB)",
                   abs(c_q - 100.0 / (51.0 * math.pi)) < 1e-12 and
                   abs(c_q - 0.6241) < 1e-4))
    checks.append(("unquantized estimation quality (mu=1, K=5, 10 dB)",
                   abs(c_0 - 50.0 / 51.0) < 1e-12 and abs(c_0 - 0.9804) < 1e-4))
    delta = float(chest.quality_ratio(1.0, 1.0, cfg)[0])
    checks.append(("quality ratio at mu0 = mu_q = 1 equals pi/2",
                   abs(delta - math.pi / 2.0) < 1e-12))
    ones = np.ones(5)
    r_mrc = float(rates.closed_form_rate(cfg, ones, MRC)[0])
    r_zfc = float(rates.closed_form_rate(cfg, ones, ZFC)[0])
    r_mrc0 = float(rates.closed_form_rate(
        validate(replace(cfg, quantized=False)), ones, MRC)[0])
    checks.append(("quantized MRC wideband limit, perfect CSI",
                   abs(r_mrc - 4.0857) < 1e-3))
    checks.append(("quantized ZFC wideband limit, perfect CSI",
                   abs(r_zfc - 5.387) < 1e-3))
    checks.append(("unquantized MRC rate, perfect CSI",
                   abs(r_mrc0 - 4.706) < 1e-3))
    loss_eq = float(rates.sinr_loss_factor(1.0))
    loss_mu1 = float(rates.sinr_loss_factor(delta))
    checks.append(("SINR loss factor at equal quality equals 2/pi",
                   abs(loss_eq - 2.0 / math.pi) < 1e-9))
    checks.append(("SINR loss factor at mu0 = mu_q = 1 equals 4/pi^2",
                   abs(loss_mu1 - 4.0 / math.pi ** 2) < 1e-9))
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}" for name, ok in checks]
    return all(ok for _, ok in checks), lines
