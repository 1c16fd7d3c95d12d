"""Per-user rate of the one-bit uplink as the channel grows more dispersive.

Reproduces the headline effect: quantized rates at L = 1 fall visibly short
of the wideband closed form because the distortion stays partly coherent with
the symbols; by L ~ 15 the limit is tight.  About a minute of Monte Carlo.
Run:  python demos/rate_vs_taps.py [trials]
"""
import sys

import numpy as np

import quantmimo as qm
from quantmimo import xp

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 120
print(f"M = 128, K = 5, 10 dB, perfect CSI, {trials} trials/point")
print(f"{'L':>4} {'combiner':>9} {'empirical':>10} {'+-':>6} {'limit':>8}")
for kind in ("mrc", "zfc"):
    for num_taps in (1, 4, 15):
        cfg = qm.equal_snr_config(128, 5, num_taps, 10.0, combiner=kind,
                                  data_len=512, seed=1)
        limit = float(qm.closed_form_rate(cfg, np.ones(5), kind)[0])
        rep, _, _ = xp.simulate_rate(cfg, trials, csi="perfect")
        print(f"{num_taps:>4} {kind:>9} {float(rep.rate.mean()):>10.3f} "
              f"{float(rep.stderr.mean()):>6.3f} {limit:>8.3f}")

print("\nFrequency selectivity helps a one-bit receiver: more taps spread the")
print("interference over time, the distortion gaussianizes, and the closed")
print("form becomes an accurate prediction.")
