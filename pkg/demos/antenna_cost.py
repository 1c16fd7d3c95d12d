"""What does one-bit quantization cost in antennas?

Bisection on the closed forms: how many antennas must the quantized system
add to match the rate of an unquantized system with the same pilot budget.
Run:  python demos/antenna_cost.py
"""
import quantmimo as qm
from quantmimo import rates

print("equal-SNR users, K = 5, L = 20, pilots N_p = K L")
print(f"{'SNR [dB]':>9} {'combiner':>9} {'antenna factor':>15}")
for snr_db in (10.0, -10.0):
    for kind in ("mrc", "zfc"):
        cfg = qm.equal_snr_config(128, 5, 20, snr_db, combiner=kind, data_len=512)
        factor = rates.antenna_cost_factor(cfg, kind, m_ref=128)
        print(f"{snr_db:>9.0f} {kind:>9} {factor:>15.2f}")

print("\none weak user at -10 dB among four 0 dB interferers")
users = (qm.UserLinkBudget(beta=0.1),) + tuple(qm.UserLinkBudget(beta=1.0)
                                               for _ in range(4))
weak = qm.validate(qm.SystemConfig(antennas=128, users=users,
                                   pdp=qm.make_uniform_pdp(20), noise_floor=1.0,
                                   pilot_len=100, data_len=512))
for kind in ("mrc", "zfc"):
    factor = rates.antenna_cost_factor(weak, kind, m_ref=128, user=0)
    print(f"{'weak':>9} {kind:>9} {factor:>15.2f}")

print("\nAt moderate SNR the one-bit system needs ~2.5x the antennas ((pi/2)^2")
print("for MRC, exactly).  A weak user pays much more: its pilots lose the")
print("quantizer's power struggle, so its channel estimate degrades on top of")
print("the SINR loss.")
