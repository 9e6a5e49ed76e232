"""Where the output ports, vias and slots go.

Odd modes are taken sine-oriented and even modes cosine-oriented about the
output reference axis.  Under that convention the two published port
angles fall straight out of the rim nulls.
"""
import math

import numpy as np

from patchbpf import (
    TM11, TM21, TM31, Orientation, ResonatorSpec, design_dual_band, design_single_band,
    slot_score, solve_output_angle,
)

spec = ResonatorSpec(16e-3)
deg = lambda angles: [round(math.degrees(a), 3) for a in angles]  # noqa: E731

print("pass TM11, null TM31       ->", deg(solve_output_angle([TM11], [TM31])))
print("pass TM11+TM31, null TM21  ->", deg(solve_output_angle([TM11, TM31], [TM21])))
print("demand 90% of TM11 instead ->", deg(solve_output_angle([TM11], [TM31], min_pass_level=0.9)))

single = design_single_band(spec, 2.77e9)
print("\nsingle band vias (rho mm, phi deg):",
      [(round(s.rho * 1e3, 2), round(math.degrees(s.phi), 1)) for s in single.via_sites])

# slots want strong TM31 current across them and weak TM11 current
R = spec.radius
phis = np.radians(np.arange(0, 91, 5))
score = slot_score(single.spec, (0.95 * R, phis))
print("\nslot score at 0.95 R:")
for p, s in zip(np.degrees(phis), score):
    print(f"  {p:5.1f} deg  {'#' * max(0, int(40 * s / score.max()))}")

dual = design_dual_band(spec, 2.77e9, slot_length=3e-3, slot_width=0.2e-3)
print("\ndual band output angle:", round(math.degrees(dual.output_pair.angle), 3))
print("dual band slots (deg):", deg(s.phi for s in dual.slot_sites))
print("TM31 stays", "sine" if dual.passed_modes[1].orientation is Orientation.SINE else "cosine", "oriented")
