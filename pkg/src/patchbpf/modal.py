"""TM-mode spectrum of a circular patch cavity with magnetic side walls."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .specfun import MAX_ORDER, prime_root

__all__ = [
    "SPEED_OF_LIGHT",
    "Orientation",
    "Parity",
    "ModeId",
    "ResonatorSpec",
    "SpectrumEntry",
    "TM11",
    "TM21",
    "TM01",
    "TM31",
    "cutoff_wavenumber",
    "resonant_frequency",
    "spectrum",
    "parity",
    "fit_eps_eff",
]

SPEED_OF_LIGHT = 299_792_458.0


class Orientation(Enum):
    """Which member of a degenerate pair: cos(n phi) or sin(n phi)."""

    COSINE = "cos"
    SINE = "sin"


class Parity(Enum):
    ODD = "odd"
    EVEN = "even"


@dataclass(frozen=True)
class ModeId:
    """A TM_ni cavity mode.

    ``n`` is the azimuthal order, ``i`` the radial index (1-based).  TM_0i has
    no degenerate partner so its orientation is always ``COSINE``.
    """

    n: int
    i: int = 1
    orientation: Orientation = Orientation.COSINE

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise ValueError(f"azimuthal index must be a non-negative integer, got {self.n!r}")
        if self.n > MAX_ORDER:
            raise ValueError(f"azimuthal index {self.n} exceeds supported order {MAX_ORDER}")
        if not isinstance(self.i, int) or isinstance(self.i, bool) or self.i < 1:
            raise ValueError(f"radial index must be a positive integer, got {self.i!r}")
        if not isinstance(self.orientation, Orientation):
            object.__setattr__(self, "orientation", Orientation(self.orientation))
        if self.n == 0 and self.orientation is not Orientation.COSINE:
            raise ValueError("TM_0i modes have no sine-oriented partner")

    @property
    def name(self) -> str:
        return f"TM{self.n}{self.i}"

    @property
    def parity(self) -> Parity:
        return Parity.ODD if self.n % 2 else Parity.EVEN

    def with_orientation(self, orientation: Orientation) -> "ModeId":
        if self.n == 0:
            return ModeId(0, self.i)
        return ModeId(self.n, self.i, Orientation(orientation))

    @classmethod
    def parse(cls, text: str, orientation: Orientation | str | None = None) -> "ModeId":
        """Build from ``"3,1"``, ``"TM31"`` or ``"TM3,1"``."""
        m = re.fullmatch(r"\s*(?:TM_?)?(\d)\s*[,_]?\s*(\d+)\s*", text, flags=re.I)
        if m is None:
            raise ValueError(f"cannot parse mode {text!r}; expected e.g. '3,1' or 'TM31'")
        n, i = int(m.group(1)), int(m.group(2))
        orient = Orientation.COSINE if orientation is None else Orientation(orientation)
        if n == 0:
            orient = Orientation.COSINE
        return cls(n, i, orient)

    def __str__(self):
        if self.n == 0:
            return self.name
        return f"{self.name}({self.orientation.value})"


TM11 = ModeId(1, 1)
TM21 = ModeId(2, 1)
TM01 = ModeId(0, 1)
TM31 = ModeId(3, 1)


@dataclass(frozen=True)
class ResonatorSpec:
    """Effective radius (m) and effective relative permittivity of a patch."""

    radius: float
    eps_eff: float = 1.0

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if not (self.eps_eff >= 1.0 and math.isfinite(self.eps_eff)):
            raise ValueError(f"eps_eff must be >= 1, got {self.eps_eff!r}")


@dataclass(frozen=True)
class SpectrumEntry:
    mode: ModeId
    k_c: float
    freq: float
    degeneracy: int


def cutoff_wavenumber(spec: ResonatorSpec, mode: ModeId) -> float:
    """k_c = v_ni / R in rad/m."""
    return prime_root(mode.n, mode.i) / spec.radius


def resonant_frequency(spec: ResonatorSpec, mode: ModeId) -> float:
    """Resonant frequency in Hz, ``c * v_ni / (2 pi R sqrt(eps_eff))``."""
    return SPEED_OF_LIGHT * cutoff_wavenumber(spec, mode) / (2.0 * math.pi * math.sqrt(spec.eps_eff))


def parity(mode: ModeId) -> Parity:
    return mode.parity


def spectrum(
    spec: ResonatorSpec, f_max: float, max_order: int = MAX_ORDER, max_index: int = 4
) -> list[SpectrumEntry]:
    """All TM_ni with f_ni <= f_max, ascending, one entry per (n, i).

    The search covers n <= max_order and i <= max_index.  Degenerate pairs are
    reported once with ``degeneracy=2`` and a cosine-oriented representative.
    """
    if not f_max > 0.0:
        raise ValueError("f_max must be positive")
    if max_order > MAX_ORDER:
        raise ValueError(f"max_order {max_order} exceeds supported order {MAX_ORDER}")
    entries = []
    for n in range(max_order + 1):
        for i in range(1, max_index + 1):
            mode = ModeId(n, i)
            f = resonant_frequency(spec, mode)
            if f > f_max:
                break  # v_ni increases with i
            entries.append(SpectrumEntry(mode, cutoff_wavenumber(spec, mode), f, 1 if n == 0 else 2))
    entries.sort(key=lambda e: (e.freq, e.mode.n, e.mode.i))
    return entries


def fit_eps_eff(radius: float, mode: ModeId, f_measured: float) -> float:
    """Effective permittivity that puts ``mode`` at ``f_measured`` for this radius."""
    if not radius > 0.0:
        raise ValueError("radius must be positive")
    if not f_measured > 0.0:
        raise ValueError("measured frequency must be positive")
    return (SPEED_OF_LIGHT * prime_root(mode.n, mode.i) / (2.0 * math.pi * radius * f_measured)) ** 2
