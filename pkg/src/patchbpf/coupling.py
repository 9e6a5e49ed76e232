"""Coupling-coefficient extraction and an approximate mixed-mode response model.

The DM path of each passband is a synchronously tuned pair of resonators
synthesised from the second-order Butterworth prototype.  Transmission zeros
are imposed with a unit-magnitude-away notch factor.  The CM path is a
qualitative sum of Lorentzian leakage peaks whose levels the user supplies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .balanced_design import (
    Excitation,
    FilterDesign,
    default_orientation,
    excitable_modes,
    rim_level,
)

__all__ = [
    "BUTTERWORTH_G",
    "CouplingResult",
    "BandSection",
    "MixedModeSParams",
    "SweepConfig",
    "BandOverlapError",
    "coupling_from_split",
    "split_from_coupling",
    "band_section_from_spec",
    "band_edges",
    "dm_response",
    "cm_response",
    "default_cm_resonances",
    "sweep",
    "passband_metrics",
]

# second-order maximally flat lowpass prototype: g0, g1, g2, g3
BUTTERWORTH_G = (1.0, math.sqrt(2.0), math.sqrt(2.0), 1.0)

DEFAULT_NOTCH_Q = 10.0
DEFAULT_CM_Q = 50.0
DEFAULT_CM_ATTENUATION_DB = 10.0


class BandOverlapError(ValueError):
    """Two passbands overlap at the 3-dB level."""


@dataclass(frozen=True)
class CouplingResult:
    f_p1: float
    f_p2: float
    k: float
    sign: int = 1


def coupling_from_split(f_p1: float, f_p2: float, sign: int = 1) -> CouplingResult:
    """k = +/-(f_p2^2 - f_p1^2) / (f_p2^2 + f_p1^2) from the two split peaks."""
    if not (f_p1 > 0.0 and f_p2 > 0.0):
        raise ValueError("split frequencies must be positive")
    if f_p1 > f_p2:
        raise ValueError("expected f_p1 <= f_p2")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b = f_p1 * f_p1, f_p2 * f_p2
    return CouplingResult(f_p1, f_p2, sign * (b - a) / (b + a), sign)


def split_from_coupling(f0: float, k: float) -> tuple[float, float]:
    """Inverse of coupling_from_split with f0^2 = (f_p1^2 + f_p2^2) / 2."""
    if not f0 > 0.0:
        raise ValueError("f0 must be positive")
    if not 0.0 <= k < 1.0:
        raise ValueError("coupling magnitude must lie in [0, 1)")
    return f0 * math.sqrt(1.0 - k), f0 * math.sqrt(1.0 + k)


@dataclass(frozen=True)
class BandSection:
    center: float
    fbw: float
    k: float
    q_ext: float

    def __post_init__(self):
        if not self.center > 0.0:
            raise ValueError("band centre must be positive")
        if not 0.0 < self.fbw < 1.0:
            raise ValueError("fractional bandwidth must lie in (0, 1)")
        if not self.q_ext > 0.0:
            raise ValueError("external Q must be positive")


def band_section_from_spec(center: float, fbw: float) -> BandSection:
    g0, g1, g2, _ = BUTTERWORTH_G
    if not 0.0 < fbw < 1.0:
        raise ValueError("fractional bandwidth must lie in (0, 1)")
    return BandSection(center, fbw, fbw / math.sqrt(g1 * g2), g0 * g1 / fbw)


def band_edges(section: BandSection) -> tuple[float, float]:
    """3-dB edges of the Butterworth section: f/f0 - f0/f = -/+ fbw."""
    h = 0.5 * section.fbw
    root = math.sqrt(h * h + 1.0)
    return section.center * (root - h), section.center * (root + h)


def _section_s(section: BandSection, f: np.ndarray):
    """S11, S21 of a symmetric two-resonator section (lossless)."""
    lam = (f / section.center - section.center / f) / section.fbw
    m = section.k / section.fbw
    inv_q = 1.0 / (section.q_ext * section.fbw)
    a = inv_q + 1j * lam
    det = a * a + m * m
    s21 = 2j * inv_q * m / det
    s11 = 1.0 - 2.0 * inv_q * a / det
    return s11, s21


def _notch(f: np.ndarray, f_z: float, q: float) -> np.ndarray:
    num = f * f - f_z * f_z
    return num / (num - 1j * f * f_z / q)


@dataclass
class MixedModeSParams:
    freqs: np.ndarray
    s_dd11: np.ndarray
    s_dd21: np.ndarray
    s_cc21: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def s_dd12(self):
        return self.s_dd21

    @property
    def s_dd22(self):
        return self.s_dd11


def _check_bands(bands: Sequence[BandSection]) -> list[BandSection]:
    ordered = sorted(bands, key=lambda b: b.center)
    for lo, hi in zip(ordered, ordered[1:]):
        if band_edges(lo)[1] >= band_edges(hi)[0]:
            raise BandOverlapError(
                f"bands at {lo.center:.6g} Hz and {hi.center:.6g} Hz overlap at the 3-dB level"
            )
    return ordered


def dm_response(
    design: FilterDesign | None,
    bands: Sequence[BandSection],
    tz: Sequence[float],
    freqs,
    *,
    notch_q: float = DEFAULT_NOTCH_Q,
) -> MixedModeSParams:
    """Differential-mode S-parameters on ``freqs``.

    S21 is the sum of the band sections' transmissions times one notch factor
    per zero; S11 is the lossless complement of the summed transmission,
    carrying the phase of the product of the sections' reflections.
    """
    f = np.asarray(freqs, dtype=float)
    if np.any(f <= 0.0):
        raise ValueError("frequencies must be positive")
    ordered = _check_bands(bands)
    for z in tz:
        for b in ordered:
            lo, hi = band_edges(b)
            if lo <= z <= hi:
                raise ValueError(f"transmission zero {z:.6g} Hz lies inside a passband")

    s21 = np.zeros(f.shape, dtype=complex)
    refl = np.ones(f.shape, dtype=complex)
    for b in ordered:
        r, t = _section_s(b, f)
        s21 += t
        refl *= r
    mag = np.abs(s21)
    if np.any(mag > 1.0 + 1e-9):
        raise BandOverlapError("summed band transmissions exceed unity; bands too close")
    phase = np.exp(1j * np.angle(refl))
    s11 = np.sqrt(np.clip(1.0 - mag * mag, 0.0, None)) * phase
    for z in tz:
        s21 = s21 * _notch(f, z, notch_q)
    return MixedModeSParams(
        freqs=f,
        s_dd11=s11,
        s_dd21=s21,
        s_cc21=np.zeros(f.shape, dtype=complex),
        metadata=_provenance(design, ordered, tz, notch_q=notch_q),
    )


def _provenance(design, bands, tz, **extra):
    meta = {
        "bands": [(b.center, b.fbw, b.k, b.q_ext) for b in bands],
        "tz": list(tz),
        "prototype_g": list(BUTTERWORTH_G),
    }
    if design is not None:
        meta["design_kind"] = design.kind.value
    meta.update(extra)
    return meta


def default_cm_resonances(
    design: FilterDesign, f_max: float, base_attenuation_db: float = DEFAULT_CM_ATTENUATION_DB
) -> list[tuple[float, float]]:
    """Even-mode leakage peaks for a design, scaled by how strongly each mode
    couples to the output pair under CM drive.

    A mode with a rim null at the output ports gets no entry.
    """
    out = []
    axis = design.reference_axis
    for entry in excitable_modes(design.spec, Excitation.CM, f_max):
        mode = entry.mode.with_orientation(default_orientation(entry.mode))
        level = rim_level(mode, design.output_pair.angle - axis)
        if level < 1e-9:
            continue
        out.append((entry.freq, base_attenuation_db - 20.0 * math.log10(level)))
    return out


def cm_response(
    design: FilterDesign | None,
    cm_resonances: Sequence[tuple[float, float]],
    freqs,
    *,
    q: float = DEFAULT_CM_Q,
) -> MixedModeSParams:
    """Common-mode leakage: one Lorentzian per (frequency, attenuation dB).

    This is a qualitative stand-in; the peak levels are inputs, not
    predictions.
    """
    f = np.asarray(freqs, dtype=float)
    if np.any(f <= 0.0):
        raise ValueError("frequencies must be positive")
    s = np.zeros(f.shape, dtype=complex)
    for f_k, att in cm_resonances:
        if att < 0.0:
            raise ValueError("CM attenuation must be >= 0 dB")
        if not f_k > 0.0:
            raise ValueError("CM resonance frequency must be positive")
        amp = 10.0 ** (-att / 20.0)
        s += amp / (1.0 + 1j * q * (f / f_k - f_k / f))
    return MixedModeSParams(
        freqs=f,
        s_dd11=np.ones(f.shape, dtype=complex),
        s_dd21=np.zeros(f.shape, dtype=complex),
        s_cc21=s,
        metadata={"cm_resonances": [tuple(r) for r in cm_resonances], "cm_q": q},
    )


@dataclass(frozen=True)
class SweepConfig:
    f_start: float = 1e9
    f_stop: float = 8e9
    n_points: int = 1001
    bands: tuple[tuple[float, float], ...] | None = None  # (centre Hz, fbw)
    tz: tuple[float, ...] | None = None
    cm_resonances: tuple[tuple[float, float], ...] | None = None  # (Hz, attenuation dB)
    notch_q: float = DEFAULT_NOTCH_Q
    cm_q: float = DEFAULT_CM_Q
    cm_attenuation_db: float = DEFAULT_CM_ATTENUATION_DB

    def __post_init__(self):
        if not 0.0 < self.f_start < self.f_stop:
            raise ValueError("need 0 < f_start < f_stop")
        if self.n_points < 2:
            raise ValueError("need at least two sweep points")

    def grid(self) -> np.ndarray:
        return np.linspace(self.f_start, self.f_stop, self.n_points)


def sweep(design: FilterDesign, config: SweepConfig | None = None) -> MixedModeSParams:
    """DM and CM responses of ``design`` on one frequency grid.

    Anything left unset in ``config`` comes from the design: its predicted
    passbands, its predicted zeros, and CM leakage at its even modes.
    """
    config = config or SweepConfig()
    f = config.grid()
    band_specs = config.bands if config.bands is not None else design.predicted_passbands
    bands = [band_section_from_spec(c, w) for c, w in band_specs]
    tz = list(config.tz if config.tz is not None else design.predicted_tz)
    if config.cm_resonances is not None:
        cm = [tuple(r) for r in config.cm_resonances]
    else:
        cm = default_cm_resonances(design, config.f_stop, config.cm_attenuation_db)
    dm = dm_response(design, bands, tz, f, notch_q=config.notch_q)
    cmr = cm_response(design, cm, f, q=config.cm_q)
    meta = dict(dm.metadata)
    meta.update(cmr.metadata)
    return MixedModeSParams(f, dm.s_dd11, dm.s_dd21, cmr.s_cc21, meta)


def passband_metrics(freqs, s21, level_db: float = -3.0) -> list[dict]:
    """Contiguous stretches where 20 log10 |s21| >= ``level_db``.

    Each entry holds the interpolated edges, the peak frequency, the edge
    midpoint ``center`` and ``fbw = (hi - lo) / center``.
    """
    f = np.asarray(freqs, dtype=float)
    mag_db = 20.0 * np.log10(np.maximum(np.abs(s21), 1e-300))
    above = mag_db >= level_db
    bands = []
    idx = np.nonzero(np.diff(above.astype(int)))[0]
    starts = [i + 1 for i in idx if not above[i]]
    ends = [i for i in idx if above[i]]
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        ends.append(len(f) - 1)

    def cross(i):
        # linear interpolation in dB between samples i and i + 1
        y0, y1 = mag_db[i] - level_db, mag_db[i + 1] - level_db
        return f[i] + (f[i + 1] - f[i]) * y0 / (y0 - y1)

    for s, e in zip(starts, ends):
        lo = cross(s - 1) if s > 0 else f[0]
        hi = cross(e) if e < len(f) - 1 else f[-1]
        seg = slice(s, e + 1)
        peak = f[seg][np.argmax(mag_db[seg])]
        center = 0.5 * (lo + hi)
        bands.append({"lo": lo, "hi": hi, "peak": peak, "center": center, "fbw": (hi - lo) / center})
    return bands
