import numpy as np
import pytest

import quantmimo as qm
from quantmimo.channel import substream
from quantmimo.waveform import CONSTANT_PHASES, RANDOM_PHASES


def test_unitary_dft_impulse():
    out = qm.unitary_dft(np.array([1.0, 0, 0, 0]))
    assert np.allclose(out, 0.5)


def test_unitary_pair_roundtrip_and_parseval():
    rng = substream(1, 0)
    v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    w = qm.unitary_dft(v)
    assert np.max(np.abs(qm.unitary_idft(w) - v)) < 1e-12
    assert abs(np.sum(np.abs(w) ** 2) - np.sum(np.abs(v) ** 2)) < 1e-12 * np.sum(np.abs(v) ** 2)


def test_pilot_comb_structure():
    book = qm.make_pilots(4, 32, substream(2, 0), RANDOM_PHASES)
    mag = np.abs(book.freq_pilots)
    for u in range(4):
        on = np.arange(u, 32, 4)
        assert np.allclose(mag[u, on], np.sqrt(4 / 32))
        off = np.setdiff1d(np.arange(32), on)
        assert np.allclose(mag[u, off], 0.0)
    # unit average transmit power per user
    energy = np.sum(np.abs(book.time_pilots) ** 2, axis=1)
    assert np.allclose(energy, 32, rtol=1e-12)


def test_constant_phase_pilot_is_sparse_spikes():
    # K=2, L=2, N_p=4 (mu=1): user 0's signal is sqrt(mu L)=sqrt(2) at n in {0,2}
    book = qm.make_pilots(2, 4, substream(3, 0), CONSTANT_PHASES)
    x0 = book.time_pilots[0]
    assert np.allclose(x0[[0, 2]], np.sqrt(2.0), atol=1e-12)
    assert np.allclose(x0[[1, 3]], 0.0, atol=1e-12)


def test_constant_phase_zero_fraction():
    # fraction of zero samples is 1 - 1/(mu L) for mu > 1
    num_users, num_taps, mu = 2, 4, 3
    n_p = mu * num_users * num_taps
    book = qm.make_pilots(num_users, n_p, substream(4, 0), CONSTANT_PHASES)
    frac = np.mean(np.abs(book.time_pilots[0]) < 1e-9)
    assert frac == pytest.approx(1.0 - 1.0 / (mu * num_taps), abs=1e-12)


def test_random_phase_pilot_energy():
    book = qm.make_pilots(1, 8, substream(5, 0), RANDOM_PHASES)
    assert np.sum(np.abs(book.time_pilots) ** 2) == pytest.approx(8.0, rel=1e-12)
    # envelope actually varies (non-sparse, non-constant)
    assert np.std(np.abs(book.time_pilots)) > 1e-3


def test_pilot_comb_misalignment_rejected():
    with pytest.raises(ValueError):
        qm.make_pilots(3, 8, substream(6, 0))


def test_data_block_modes():
    cfg_sc = qm.equal_snr_config(2, 3, 4, 0.0, data_len=64, waveform="sc", seed=7)
    blk = qm.draw_data_block(cfg_sc, substream(7, 0))
    assert np.array_equal(blk.symbols, blk.time_signal)
    cfg_of = qm.equal_snr_config(2, 3, 4, 0.0, data_len=64, waveform="ofdm", seed=7)
    blk2 = qm.draw_data_block(cfg_of, substream(7, 0))
    assert np.max(np.abs(qm.unitary_dft(blk2.time_signal) - blk2.symbols)) < 1e-12


def test_symbol_statistics():
    cfg = qm.equal_snr_config(2, 2, 4, 0.0, data_len=1 << 16, seed=8)
    blk = qm.draw_data_block(cfg, substream(8, 0))
    var = np.mean(np.abs(blk.symbols) ** 2)
    assert abs(var - 1.0) < 0.005
    assert abs(np.mean(blk.symbols)) < 0.01


def test_qpsk_constellation():
    cfg = qm.equal_snr_config(2, 1, 1, 0.0, pilot_excess=4, data_len=4096, seed=9)
    blk = qm.draw_data_block(cfg, substream(9, 0), constellation="qpsk")
    assert np.allclose(np.abs(blk.symbols), 1.0)
    assert len(np.unique(np.round(blk.symbols, 6))) == 4


def test_cyclic_prefix_add_strip():
    x = np.array([[1.0, 2.0, 3.0, 4.0]])
    ext = qm.add_cyclic_prefix(x, 3)
    assert np.array_equal(ext[0], [3, 4, 1, 2, 3, 4])
    assert np.array_equal(qm.add_cyclic_prefix(x, 1), x)
    assert np.array_equal(qm.strip_cyclic_prefix(ext, 3), x)


def test_cp_turns_linear_into_circular_convolution():
    rng = substream(10, 0)
    x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    h = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    ext = qm.add_cyclic_prefix(x[None, :], 5)[0]
    lin = np.convolve(ext, h)[: ext.size]
    block = qm.strip_cyclic_prefix(lin[None, :], 5)[0]
    circ = np.fft.ifft(np.fft.fft(x) * np.fft.fft(h, 16))
    assert np.max(np.abs(block - circ)) < 1e-12
