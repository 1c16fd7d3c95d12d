import json
from dataclasses import replace

import numpy as np
import pytest

import quantmimo as qm
from quantmimo import cli, rates, xp


def test_frequency_domain_io_identity():
    # noise-free, unquantized end-to-end: y~ = sum_k sqrt(b P) h~ x~ + 0 exactly
    cfg = qm.equal_snr_config(4, 3, 6, 3.0, data_len=64, quantized=False, seed=1)
    cfg = qm.validate(replace(cfg, noise_floor=0.0))
    stats = xp.link_stats(cfg)
    x, xhat, det = xp.run_link_trial(cfg, 0, 0, stats, csi="perfect", detail=True)
    h_freq = qm.freq_response(det["taps"], 64)
    amps = np.sqrt(cfg.rx_powers)
    y_pred = np.einsum("k,mkn,kn->mn", amps, h_freq, x)
    assert np.max(np.abs(det["y_freq"] - y_pred)) < 1e-12


def test_trial_reproducible_and_order_independent():
    cfg = qm.equal_snr_config(8, 2, 4, 5.0, data_len=64, seed=9)
    stats = xp.link_stats(cfg)
    x1, xhat1, _ = xp.run_link_trial(cfg, 3, 17, stats, csi="estimated")
    x2, xhat2, _ = xp.run_link_trial(cfg, 3, 17, stats, csi="estimated")
    assert np.array_equal(x1, x2) and np.array_equal(xhat1, xhat2)


def test_simulate_rate_worker_count_invariance():
    cfg = qm.equal_snr_config(16, 2, 4, 5.0, data_len=128, seed=4)
    rep1, acc1, _ = xp.simulate_rate(cfg, 8, csi="perfect", workers=1)
    rep2, acc2, _ = xp.simulate_rate(cfg, 8, csi="perfect", workers=3)
    assert np.array_equal(rep1.rate, rep2.rate)
    assert np.array_equal(rep1.stderr, rep2.stderr)


def test_sc_ofdm_gaussian_equivalence_wideband():
    cfg = qm.equal_snr_config(32, 5, 64, 10.0, data_len=256, combiner="mrc", seed=5)
    out = xp.compare_waveforms(cfg, 50, csi="perfect")
    assert np.all(np.abs(out["rate_gap"]) < 2.5 * out["gap_se"])


def test_sc_ofdm_qpsk_narrowband_gap():
    cfg = qm.equal_snr_config(128, 5, 1, 10.0, data_len=256, combiner="mrc", seed=5)
    out = xp.compare_waveforms(cfg, 40, csi="perfect", constellation="qpsk")
    assert np.all(out["rate_gap"] > 4 * out["gap_se"])


def test_decomposition_audit():
    cfg = qm.equal_snr_config(32, 5, 64, 10.0, combiner="mrc", data_len=256, seed=21)
    audit = xp.run_decomposition_audit(cfg, trials=40)
    assert audit["identity_gap"] < 1e-12
    corr = np.abs(audit["correlation"] - np.diag(np.diag(audit["correlation"])))
    assert corr.max() < 4 / np.sqrt(audit["samples"])
    assert audit["corr_err_tx"] < 4 / np.sqrt(audit["samples"])
    assert abs(audit["var_noise_term"] / audit["expected_var_noise"] - 1) < 0.02
    assert abs(audit["var_estimation_term"] / audit["expected_var_estimation"] - 1) < 0.02


def test_selftest_green():
    ok, lines = xp.selftest()
    assert ok
    assert len(lines) == 8
    assert all(line.startswith("PASS") for line in lines)


def test_fig2_analytic_column_matches_closed_form():
    spec = xp.SweepSpec(figure="fig2", seed=1, trials=3, grid=(1, 4))
    fields, rows, manifest = xp.run_sweep(spec)
    assert "c_db_analytic" in fields
    for row in rows:
        cfg = qm.equal_snr_config(8, row["K"], 8, row["snr_db"],
                                  pilot_excess=int(row["mu"]), data_len=64)
        expect = 10 * np.log10(qm.analytic_quality(cfg, quantized=row["quantized"])[0])
        assert row["c_db_analytic"] == pytest.approx(expect, abs=1e-12)
    assert manifest["rows"] == len(rows)


def test_fig8_zfc_flattens_toward_ceiling():
    spec = xp.SweepSpec(figure="fig8", seed=1, trials=0)
    fields, rows, _ = xp.run_sweep(spec)
    zfc_q = [r for r in rows if r["combiner"] == "zfc" and r["quantized"]
             and r["user"] == 0]
    zfc_0 = [r for r in rows if r["combiner"] == "zfc" and not r["quantized"]
             and r["user"] == 0]
    zfc_q.sort(key=lambda r: r["value"])
    zfc_0.sort(key=lambda r: r["value"])
    ceiling = zfc_q[-1]["ceiling_bpcu"]
    # quantized: increments shrink and the curve stays under the ceiling
    tail_slope = zfc_q[-1]["rate_limit_bpcu"] - zfc_q[-2]["rate_limit_bpcu"]
    head_slope = zfc_q[11]["rate_limit_bpcu"] - zfc_q[10]["rate_limit_bpcu"]
    assert tail_slope < 0.4 * head_slope
    assert zfc_q[-1]["rate_limit_bpcu"] < ceiling < zfc_q[-1]["rate_limit_bpcu"] + 0.2
    # unquantized keeps rising at an undiminished pace
    un_tail = zfc_0[-1]["rate_limit_bpcu"] - zfc_0[-2]["rate_limit_bpcu"]
    assert un_tail > 0.25


def test_fig5_csv_round_trip(tmp_path):
    spec = xp.SweepSpec(figure="fig5", seed=3, trials=2, grid=(1,))
    fields, rows, manifest = xp.run_sweep(spec)
    out = tmp_path / "fig5.csv"
    xp.write_csv(out, fields, rows)
    text = out.read_text().splitlines()
    assert text[0] == ",".join(xp.RATE_FIELDS)
    assert len(text) == len(rows) + 1
    # rerun reproduces the bytes
    fields2, rows2, _ = xp.run_sweep(spec)
    out2 = tmp_path / "fig5b.csv"
    xp.write_csv(out2, fields2, rows2)
    assert out.read_bytes() == out2.read_bytes()


def test_cli_selftest_and_custom(tmp_path, capsys):
    assert cli.main(["selftest"]) == 0
    cfg_doc = {
        "antennas": 16, "users": [{"snr_db": 10.0} for _ in range(2)],
        "pdp": {"kind": "uniform", "taps": 4}, "pilot_len": 8, "data_len": 64,
        "combiner": "mrc", "seed": 5,
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(cfg_doc))
    code = cli.main(["custom", "--config", str(path), "--trials", "5",
                     "--out", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out" / "custom.csv").exists()
    assert (tmp_path / "out" / "manifest.json").exists()


def test_cli_bad_config_usage_error(tmp_path):
    bad = {"antennas": 16, "users": [{"snr_db": 0.0} for _ in range(5)],
           "pdp": {"kind": "uniform", "taps": 20}, "pilot_len": 99,
           "data_len": 512}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    with pytest.raises(SystemExit) as err:
        cli.main(["custom", "--config", str(path)])
    assert err.value.code == 2


def test_cli_fig_writes_outputs(tmp_path):
    code = cli.main(["fig4", "--out", str(tmp_path), "--format", "csv"])
    assert code == 0
    assert (tmp_path / "fig4.csv").exists()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["figure"] == "fig4"
    assert manifest["rows"] > 0
