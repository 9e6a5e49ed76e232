"""Mode spectrum of a 16 mm circular patch.

Only one number is measured: TM11 at 2.77 GHz.  Everything else follows
from the derivative roots of J_n, so the first check is how well the
higher modes land.
"""
from patchbpf import TM01, TM11, TM21, TM31, ResonatorSpec, fit_eps_eff, prime_root, resonant_frequency, spectrum

R = 16e-3
eps = fit_eps_eff(R, TM11, 2.77e9)
spec = ResonatorSpec(R, eps)
print(f"fitted eps_eff = {eps:.4f}  (substrate eps_r is 3.66, so the fit soaks up fringing)")

# roots of J_n' set the ordering on their own
for n in range(4):
    print(f"v_{n}1 = {prime_root(n, 1):.9f}")

print("\nmode   f (GHz)   measured")
measured = {"TM11": 2.77, "TM21": 4.60, "TM01": 5.77, "TM31": 6.33}
for m in (TM11, TM21, TM01, TM31):
    f = resonant_frequency(spec, m) / 1e9
    print(f"{m.name:<6s} {f:8.4f}   {measured[m.name]:.2f}  ({100 * (f / measured[m.name] - 1):+.2f}%)")

# everything up to 9 GHz, radial overtones included
print("\nfull list below 9 GHz:")
for e in spectrum(spec, 9e9):
    print(f"  {e.mode.name:<5s} {e.freq / 1e9:7.3f} GHz  x{e.degeneracy}")
