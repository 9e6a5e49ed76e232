"""Approximate mixed-mode response.

A second-order Butterworth section per passband, a notch at the even mode
the output ports reject, and Lorentzian common-mode leakage.  The CM levels
are inputs, not predictions.
"""
import numpy as np

from patchbpf import (
    ResonatorSpec, SweepConfig, coupling_from_split, design_dual_band, design_single_band,
    passband_metrics, sweep,
)

spec = ResonatorSpec(16e-3)

# coupling from a pair of split peaks
print("k(2.5, 2.7 GHz) =", round(coupling_from_split(2.5e9, 2.7e9).k, 6))

single = design_single_band(spec, 2.77e9)
cfg = SweepConfig(n_points=7001, bands=((2.63e9, 0.157),), cm_resonances=((4.735e9, 10.0), (7.46e9, 10.0)))
sp = sweep(single, cfg)
for b in passband_metrics(sp.freqs, sp.s_dd21):
    print(f"single: centre {b['center'] / 1e9:.3f} GHz, FBW {100 * b['fbw']:.1f}%")
i = np.argmin(abs(sp.freqs - 2.63e9))
print(f"CM leakage at 2.63 GHz: {20 * np.log10(abs(sp.s_cc21[i])):.1f} dB")
print("passive:", bool(np.all(abs(sp.s_dd11) ** 2 + abs(sp.s_dd21) ** 2 <= 1 + 1e-9)))

dual = design_dual_band(spec, 2.77e9)
sp = sweep(dual, SweepConfig(n_points=7001))
for b in passband_metrics(sp.freqs, sp.s_dd21):
    print(f"dual: centre {b['center'] / 1e9:.3f} GHz, FBW {100 * b['fbw']:.1f}%")
z = dual.predicted_tz[0]
print(f"zero at {z / 1e9:.3f} GHz, |S21| there = {abs(sweep(dual, SweepConfig(z * 0.999, z, 2)).s_dd21[-1]):.1e}")
