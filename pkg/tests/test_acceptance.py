"""Acceptance criteria, one check per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.
"""
import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import bisect_prime_roots  # noqa: E402
from patchbpf import cli  # noqa: E402
from patchbpf.balanced_design import (  # noqa: E402
    Excitation,
    PortPair,
    design_single_band,
    port_coupling,
    slot_score,
    solve_output_angle,
)
from patchbpf.coupling import (  # noqa: E402
    SweepConfig,
    coupling_from_split,
    passband_metrics,
    split_from_coupling,
    sweep,
)
from patchbpf.fields import field_at  # noqa: E402
from patchbpf.modal import (  # noqa: E402
    TM01,
    TM11,
    TM21,
    TM31,
    ModeId,
    Orientation,
    ResonatorSpec,
    fit_eps_eff,
    resonant_frequency,
)
from patchbpf.specfun import prime_root, prime_roots  # noqa: E402

SIN, COS = Orientation.SINE, Orientation.COSINE
REF_SPEC = ResonatorSpec(16e-3, fit_eps_eff(16e-3, TM11, 2.77e9))


def report(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    return ok


def criterion_1():
    oracle = {n: bisect_prime_roots(n, 2) for n in range(4)}
    prime_roots.cache_clear()
    t0 = time.perf_counter()
    got = {n: [prime_root(n, i) for i in (1, 2)] for n in range(4)}
    elapsed = time.perf_counter() - t0
    err = max(abs(a - b) for n in range(4) for a, b in zip(got[n], oracle[n]))
    return report(1, err <= 1e-9 and elapsed < 1.0,
                  f"max |root - oracle| = {err:.2e} (tol 1e-9), {elapsed:.3f} s (limit 1 s)")


def criterion_2():
    f11 = resonant_frequency(REF_SPEC, TM11)
    ratios = [resonant_frequency(REF_SPEC, m) / f11 for m in (TM21, TM01, TM31)]
    oracle_err = max(abs(r - w) for r, w in zip(ratios, (1.6588, 2.0811, 2.2818)))
    measured = [4.60 / 2.77, 5.77 / 2.77, 6.33 / 2.77]
    measured_err = max(abs(r / m - 1) for r, m in zip(ratios, measured))
    ok = oracle_err <= 1e-3 and measured_err <= 5e-3
    return report(2, ok, f"ratios {', '.join(f'{r:.4f}' for r in ratios)}; "
                         f"oracle dev {oracle_err:.1e} (tol 1e-3), measured dev {100 * measured_err:.3f}% (tol 0.5%)")


def criterion_3():
    pred = [resonant_frequency(REF_SPEC, m) for m in (TM21, TM01, TM31)]
    dev = [abs(p / m - 1) for p, m in zip(pred, (4.60e9, 5.77e9, 6.33e9))]
    return report(3, max(dev) <= 5e-3,
                  "TM21/TM01/TM31 = " + "/".join(f"{p / 1e9:.4f}" for p in pred)
                  + f" GHz vs 4.60/5.77/6.33, max dev {100 * max(dev):.3f}% (tol 0.5%); "
                  + f"eps_eff = {REF_SPEC.eps_eff:.4f}")


def criterion_4():
    rng = np.random.default_rng(4)
    worst = 0.0
    selection_ok = True
    for _ in range(1000):
        n = int(rng.integers(0, 7))
        mode = ModeId(n, int(rng.integers(1, 4)), SIN if (n and rng.random() < 0.5) else COS)
        rho = rng.uniform(0, 1) * REF_SPEC.radius
        phi = rng.uniform(0, 2 * math.pi)
        a = field_at(REF_SPEC, mode, rho, phi, normalized=True).e_z
        b = field_at(REF_SPEC, mode, rho, phi + math.pi, normalized=True).e_z
        worst = max(worst, abs(b - (-1) ** n * a))
        pair = PortPair(phi)
        dm = abs(port_coupling(REF_SPEC, mode, pair, Excitation.DM))
        cm = abs(port_coupling(REF_SPEC, mode, pair, Excitation.CM))
        silent = cm if n % 2 else dm
        selection_ok &= silent <= 1e-12
    return report(4, worst <= 1e-12 and selection_ok,
                  f"max |E_z(phi+180) - (-1)^n E_z(phi)| = {worst:.1e} over 1000 samples (tol 1e-12); "
                  f"DM->odd / CM->even selection {'exact' if selection_ok else 'VIOLATED'}")


def criterion_5():
    single = [math.degrees(a) for a in solve_output_angle([TM11], [TM31])]
    dual = [math.degrees(a) for a in solve_output_angle([TM11, TM31], [TM21])]
    phis = np.arange(0.0, 90.0 + 1e-9, 0.25)
    scores = slot_score(REF_SPEC, (0.95 * REF_SPEC.radius, np.radians(phis)))
    peak = float(phis[int(np.argmax(scores))])
    ok = (any(abs(a - 60) < 1e-9 for a in single) and any(abs(a - 45) < 1e-9 for a in dual)
          and abs(peak - 60) <= 2)
    fmt = lambda angles: ", ".join(f"{a:.6f}" for a in angles)  # noqa: E731
    return report(5, ok, f"single-band angles [{fmt(single)}] deg, dual-band [{fmt(dual)}] deg; "
                         f"slot_score argmax {peak:.2f} deg (60 +/- 2)")


def criterion_6():
    rng = np.random.default_rng(6)
    worst = 0.0
    for f0, k in zip(10 ** rng.uniform(6, 12, 10_000), rng.uniform(0, 0.99, 10_000)):
        lo, hi = split_from_coupling(f0, k)
        res = coupling_from_split(lo, hi)
        worst = max(worst, abs(res.k - k) / max(k, 1e-300), abs(math.sqrt((lo * lo + hi * hi) / 2) / f0 - 1))
    hand = coupling_from_split(2.5e9, 2.7e9).k
    scale_ok = all(
        coupling_from_split(2.5e9 * s, 2.7e9 * s).k == hand for s in (0.25, 0.5, 2.0, 4.0, 1024.0)
    )
    ok = worst <= 1e-12 and abs(hand - 0.076809) <= 1e-6 and scale_ok
    return report(6, ok, f"round-trip worst rel err {worst:.1e} over 1e4 pairs (tol 1e-12); "
                         f"k(2.5, 2.7 GHz) = {hand:.6f}; binary scale invariance {'exact' if scale_ok else 'BROKEN'}")


def criterion_7():
    phi = np.arange(360) * (2 * math.pi / 360)
    worst = 0.0
    for mode in (TM11, TM21, TM01, TM31):
        rim = np.abs(field_at(REF_SPEC, mode, REF_SPEC.radius, phi).h_phi)
        grid = field_at(REF_SPEC, mode, np.linspace(0, REF_SPEC.radius, 401)[:, None], phi[None, :])
        peak = max(np.max(np.abs(grid.h_phi)), np.max(np.abs(grid.h_rho)))
        worst = max(worst, float(rim.max() / peak))
    return report(7, worst <= 1e-9, f"max |H_phi(R)| / peak |H_t| = {worst:.1e} over 4 modes x 360 pts (tol 1e-9)")


def criterion_8():
    design = design_single_band(REF_SPEC, 2.77e9)
    cfg = SweepConfig(f_start=1e9, f_stop=8e9, n_points=14001, bands=((2.63e9, 0.157),))
    sp = sweep(design, cfg)
    bands = passband_metrics(sp.freqs, sp.s_dd21)
    band = bands[0] if len(bands) == 1 else None
    tz = design.predicted_tz[0]
    passive = float(np.max(np.abs(sp.s_dd11) ** 2 + np.abs(sp.s_dd21) ** 2))
    ok = (
        band is not None
        and abs(band["center"] / 2.63e9 - 1) <= 0.01
        and abs(band["fbw"] / 0.157 - 1) <= 0.05
        and 4.067e9 <= tz <= 4.683e9
        and passive <= 1 + 1e-9
    )
    detail = (f"centre {band['center'] / 1e9:.4f} GHz (2.63 +/- 1%), FBW {100 * band['fbw']:.2f}% "
              f"(15.7% +/- 5% rel)" if band else f"{len(bands)} passbands found")
    return report(8, ok, f"{detail}; TZ {tz / 1e9:.4f} GHz in [4.067, 4.683]; "
                         f"max |S11|^2+|S21|^2 = {passive:.10f}")


def criterion_9():
    print("criterion  9: N/A   not reproducible at desk scale: absolute CM suppression (46 / 35.5 dB), "
          "via-induced shifts, slot tuning curve, aperture coupling curves; covered by the property "
          "suites of criteria 4-7 and coupling monotonicity")
    return True


def criterion_10():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for run in ("a", "b"):
            for preset in ("single", "dual"):
                base = tmp / run / preset
                codes = [
                    cli.main(["report", "--preset", preset, "--out", str(base / "report")]),
                    cli.main(["sparams", "--preset", preset, "--out", str(base / "sparams")]),
                ]
                if any(codes):
                    return report(10, False, f"CLI exit codes {codes}")
        blobs = {run: {p.relative_to(tmp / run): p.read_bytes() for p in sorted((tmp / run).rglob("*")) if p.is_file()}
                 for run in ("a", "b")}
    same = blobs["a"] == blobs["b"]
    return report(10, same and len(blobs["a"]) == 14,
                  f"{len(blobs['a'])} data files over two runs, {'byte-identical' if same else 'DIFFERENT'}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 11)])
def test_criterion(check, capsys):
    with capsys.disabled():
        print()
        ok = check()
    assert ok


if __name__ == "__main__":
    import contextlib
    import io

    results = []
    for check in CRITERIA:
        quiet = io.StringIO()
        with contextlib.redirect_stdout(quiet):
            ok = check()
        # keep only the verdict line; CLI chatter from criterion 10 is dropped
        print(next(ln for ln in quiet.getvalue().splitlines() if ln.startswith("criterion")))
        results.append(ok)
    sys.exit(0 if all(results) else 1)
