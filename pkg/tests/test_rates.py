import math
from dataclasses import replace

import numpy as np
import pytest

import quantmimo as qm
from quantmimo import rates, xp
from quantmimo.channel import substream


def test_accumulator_matches_direct_moments():
    rng = substream(1, 0)
    acc = qm.MomentAccumulator(2)
    xs, ys = [], []
    for _ in range(5):
        x = rng.standard_normal((2, 64)) + 1j * rng.standard_normal((2, 64))
        y = 0.3 * x + 0.1 * (rng.standard_normal((2, 64)) + 1j * rng.standard_normal((2, 64)))
        acc.add_trial(x, y)
        xs.append(x)
        ys.append(y)
    x = np.concatenate(xs, axis=1)
    y = np.concatenate(ys, axis=1)
    g = np.sum(np.conj(x) * y, axis=1)
    sxx = np.sum(np.abs(x) ** 2, axis=1)
    syy = np.sum(np.abs(y) ** 2, axis=1)
    sinr_direct = (np.abs(g) ** 2 / sxx) / (syy - np.abs(g) ** 2 / sxx)
    assert np.allclose(acc.sinr(), sinr_direct, rtol=1e-9)


def test_accumulator_merge_equals_single():
    rng = substream(2, 0)
    trials = [(rng.standard_normal((1, 32)) + 1j * rng.standard_normal((1, 32)),
               rng.standard_normal((1, 32)) + 1j * rng.standard_normal((1, 32)))
              for _ in range(6)]
    whole = qm.MomentAccumulator(1)
    for x, y in trials:
        whole.add_trial(x, y)
    a, b = qm.MomentAccumulator(1), qm.MomentAccumulator(1)
    for x, y in trials[:2]:
        a.add_trial(x, y)
    for x, y in trials[2:]:
        b.add_trial(x, y)
    merged = a.merge(b)
    assert merged.rate() == pytest.approx(whole.rate(), rel=1e-12)
    assert merged.ntrials == 6


def test_degenerate_moments_flagged():
    acc = qm.MomentAccumulator(1)
    with pytest.raises(qm.DegenerateMomentsError):
        acc.rate()
    x = np.ones((1, 4), dtype=complex)
    acc.add_trial(x, 2.0 * x)  # single proportional trial: zero residual
    with pytest.raises(qm.DegenerateMomentsError):
        acc.rate()


def test_noiseless_zfc_rate_hits_float_floor():
    cfg = qm.equal_snr_config(8, 2, 4, 10.0, data_len=64, combiner="zfc",
                              quantized=False, seed=3)
    cfg = qm.validate(replace(cfg, noise_floor=0.0))
    rep, _, _ = xp.simulate_rate(cfg, 25, csi="perfect")
    assert np.all(rep.rate > 30.0)


def test_closed_form_rates_reference_values():
    cfg = qm.equal_snr_config(128, 5, 20, 10.0, data_len=512)
    ones = np.ones(5)
    assert rates.closed_form_rate(cfg, ones, "mrc")[0] == pytest.approx(
        math.log2(1 + (2 / math.pi) * 1280 / 51), abs=1e-12)
    assert rates.closed_form_rate(cfg, ones, "mrc")[0] == pytest.approx(4.0857, abs=1e-3)
    assert rates.closed_form_rate(cfg, ones, "zfc")[0] == pytest.approx(5.387, abs=1e-3)
    un = qm.validate(replace(cfg, quantized=False))
    assert rates.closed_form_rate(un, ones, "mrc")[0] == pytest.approx(4.706, abs=1e-3)
    k30 = qm.equal_snr_config(128, 30, 1, 10.0, data_len=512)
    assert rates.closed_form_rate(k30, np.ones(30), "mrc")[0] == pytest.approx(
        1.890, abs=1e-3)


def test_sinr_terms_sum_to_denominator():
    cfg = qm.SystemConfig(antennas=64, users=(qm.UserLinkBudget(0.1, 1.0),
                                              qm.UserLinkBudget(1.0, 1.0),
                                              qm.UserLinkBudget(2.0, 1.0)),
                          pdp=qm.make_uniform_pdp(8), noise_floor=0.7,
                          pilot_len=24, data_len=64)
    quality = qm.analytic_quality(cfg)
    for kind in ("mrc", "zfc"):
        terms = rates.sinr_terms(cfg, quality, kind)
        total = terms["interference"] + terms["noise"] + terms["distortion"]
        assert np.max(np.abs(total - terms["denominator"])) < 1e-9
        # distortion term must not scale with the array size
        bigger = rates.sinr_terms(cfg, quality, kind, antennas=128)
        assert bigger["distortion"] == terms["distortion"]
        assert np.all(bigger["signal"] > terms["signal"])


def test_mrc_sinr_numerator_doubles_with_antennas():
    cfg = qm.equal_snr_config(64, 5, 20, 10.0, data_len=512)
    quality = qm.analytic_quality(cfg)
    t1 = rates.sinr_terms(cfg, quality, "mrc")
    t2 = rates.sinr_terms(cfg, quality, "mrc", antennas=128)
    assert np.allclose(t2["signal"], 2 * t1["signal"], rtol=1e-12)


def test_characteristic_params_mrc_zfc():
    cfg = qm.equal_snr_config(64, 4, 6, 0.0, data_len=64, seed=4)
    g_mrc, i_mrc = rates.characteristic_params_empirical(
        cfg, "mrc", trials=400, rng=substream(4, 0), tones=32)
    assert np.all(np.abs(g_mrc - 64) < 2)
    assert np.all(np.abs(i_mrc - 1.0) < 0.05)
    g_zfc, i_zfc = rates.characteristic_params_empirical(
        cfg, "zfc", trials=400, rng=substream(4, 1), tones=32)
    assert np.all(np.abs(g_zfc - 60) < 2)
    assert np.all(np.abs(i_zfc) < 0.02)


def test_characteristic_params_rzfc_limit():
    cfg = qm.equal_snr_config(32, 4, 6, 0.0, data_len=64, seed=5)
    g_rz, i_rz = rates.characteristic_params_empirical(
        cfg, "rzfc", reg=1e-9, trials=40, rng=substream(5, 0), tones=16)
    g_zf, i_zf = rates.characteristic_params_empirical(
        cfg, "zfc", trials=40, rng=substream(5, 0), tones=16)
    assert np.allclose(g_rz, g_zf, rtol=1e-4)
    assert np.allclose(i_rz, i_zf, atol=1e-4)


def test_zfc_rate_ceiling_matches_high_snr_limit():
    cfg = qm.equal_snr_config(128, 5, 20, 10.0, data_len=512)
    ceiling = rates.zfc_rate_ceiling(cfg)
    # independent oracle: evaluate the closed-form ZFC rate at absurd SNR
    huge = qm.equal_snr_config(128, 5, 20, 150.0, data_len=512)
    r_huge = rates.closed_form_rate(huge, qm.analytic_quality(huge), "zfc")[0]
    assert ceiling == pytest.approx(r_huge, rel=1e-6)
    # and the 10 dB operating point already sits just below it
    r10 = rates.closed_form_rate(cfg, qm.analytic_quality(cfg), "zfc")[0]
    assert r10 < ceiling < r10 + 0.2


def test_loss_factor_values():
    assert rates.sinr_loss_factor(1.0) == pytest.approx(2 / math.pi, abs=1e-12)
    cfg = qm.equal_snr_config(128, 5, 20, 10.0, data_len=512)
    delta = qm.quality_ratio(1, 1, cfg)[0]
    assert rates.sinr_loss_factor(delta) == pytest.approx(4 / math.pi ** 2, abs=1e-12)
    assert 10 * math.log10(rates.sinr_loss_factor(1.0)) == pytest.approx(-1.961, abs=5e-4)
    assert 10 * math.log10(rates.sinr_loss_factor(delta)) == pytest.approx(-3.922, abs=5e-4)


def test_rate_baselines_bundle():
    cfg = qm.equal_snr_config(128, 5, 20, 10.0, data_len=512)
    base = rates.rate_baselines(cfg)
    assert base["zfc_ceiling"] == pytest.approx(4.1509, abs=1e-4)
    assert base["mrc_unquantized"][0] > base["mrc_quantized"][0]
    assert base["zfc_unquantized"][0] > base["zfc_quantized"][0]
    assert base["loss_factor"][0] == pytest.approx(4 / math.pi ** 2, abs=1e-12)


def test_weak_user_closed_form_below_equal_snr():
    for m in (32, 64, 128):
        eq = qm.equal_snr_config(m, 5, 20, -10.0, data_len=512)
        r_eq = rates.closed_form_rate(eq, qm.analytic_quality(eq), "mrc")[0]
        users = (qm.UserLinkBudget(beta=0.1),) + tuple(
            qm.UserLinkBudget(beta=1.0) for _ in range(4))
        weak = qm.validate(replace(eq, users=users))
        r_weak = rates.closed_form_rate(weak, qm.analytic_quality(weak), "mrc")[0]
        assert r_weak < r_eq


def test_antenna_cost_factor_equal_snr():
    cfg = qm.equal_snr_config(128, 5, 20, 10.0, data_len=512)
    factor = rates.antenna_cost_factor(cfg, "mrc", m_ref=128)
    assert factor == pytest.approx((math.pi / 2) ** 2, abs=0.01)
    lo = qm.equal_snr_config(128, 5, 20, -10.0, data_len=512)
    assert rates.antenna_cost_factor(lo, "mrc", m_ref=128) == pytest.approx(2.47, abs=0.02)
    assert rates.antenna_cost_factor(lo, "zfc", m_ref=128) == pytest.approx(2.6, abs=0.05)


def test_moment_domain_gap_zero_by_unitarity():
    rng = substream(6, 0)
    x = rng.standard_normal((3, 64)) + 1j * rng.standard_normal((3, 64))
    y = rng.standard_normal((3, 64)) + 1j * rng.standard_normal((3, 64))
    assert rates.moment_domain_gap(x, y) < 1e-10
