"""How coarse is a one-bit ADC, statistically?

Sweeps the number of channel taps and shows the Bussgang picture: the
quantizer output is a scaled copy of its input plus an uncorrelated
distortion whose variance falls toward 1 - 2/pi as the received power
hardens across symbols.  Run:  python demos/quantizer_distortion.py
"""
import math

import numpy as np

import quantmimo as qm
from quantmimo import linksim, waveform
from quantmimo.channel import substream

print(f"{'L':>4} {'rho_hat':>10} {'rho_limit':>10} {'E_hat':>8} {'1-2/pi':>8}")
for num_taps in (1, 4, 16, 64):
    cfg = qm.equal_snr_config(8, 5, num_taps, 10.0, data_len=1024, seed=2)
    ys, qs = [], []
    for t in range(48):
        rng = substream(cfg.seed, 0, t, 0)
        h = qm.draw_channel(cfg, rng)
        blk = qm.draw_data_block(cfg, rng)
        rx = linksim.receive(h, waveform.add_cyclic_prefix(blk.time_signal, num_taps),
                             cfg, rng, gain=1.0)
        ys.append(waveform.strip_cyclic_prefix(rx.analog, num_taps))
        qs.append(waveform.strip_cyclic_prefix(rx.quantized, num_taps))
    y = np.concatenate(ys, axis=None)
    q = np.concatenate(qs, axis=None)
    rho = qm.bussgang_gain_empirical(y, q)
    err = linksim.quantization_error(y, q, rho)
    print(f"{num_taps:>4} {rho:>10.5f} {qm.bussgang_gain_limit(cfg):>10.5f} "
          f"{np.mean(np.abs(err) ** 2):>8.4f} {1 - 2 / math.pi:>8.4f}")

print()
print("The scaling approaches sqrt(2/(pi P_mean)) as the taps multiply (from")
print("below, by Jensen, though sampling noise blurs the last fraction of a")
print("percent) and the distortion variance falls to 1 - 2/pi.")
