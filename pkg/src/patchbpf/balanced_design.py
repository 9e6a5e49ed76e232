"""Port, via and slot placement for balanced circular-patch filters.

All angles are radians measured from a reference axis tied to the output
ports.  Odd modes (DM-excited) are taken sine-oriented and even modes
(CM-excited) cosine-oriented in that frame; ``orientation_rule`` overrides
this.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .fields import field_at, rim_nulls, surface_current
from .modal import (
    TM01,
    TM11,
    TM21,
    TM31,
    ModeId,
    Orientation,
    Parity,
    ResonatorSpec,
    SpectrumEntry,
    fit_eps_eff,
    resonant_frequency,
    spectrum,
)

__all__ = [
    "Excitation",
    "Layer",
    "FilterKind",
    "PerturberKind",
    "PortPair",
    "PerturberSite",
    "FilterDesign",
    "UnsatisfiableError",
    "DEFAULT_MIN_PASS_LEVEL",
    "default_orientation",
    "excited_parity",
    "excitable_modes",
    "port_coupling",
    "rim_level",
    "solve_output_angle",
    "via_score",
    "slot_score",
    "via_sites",
    "slot_sites",
    "design_single_band",
    "design_dual_band",
]

DEFAULT_MIN_PASS_LEVEL = 0.5
_ANGLE_MATCH = 1e-9
INPUT_ANGLE = math.pi / 2  # input pair on the DM-mode maxima, clear of the via diameter
TWO_PI = 2.0 * math.pi

OrientationRule = Callable[[ModeId], Orientation]


class Excitation(Enum):
    DM = "dm"
    CM = "cm"


class Layer(Enum):
    TOP = "top"
    BOTTOM = "bottom"


class FilterKind(Enum):
    SINGLE = "single"
    DUAL = "dual"


class PerturberKind(Enum):
    VIA = "via"
    SLOT = "slot"


class UnsatisfiableError(ValueError):
    """A placement constraint set that no angle can meet, whatever the search."""


def _wrap(angle: float) -> float:
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fold values within rounding of 2 pi back to 0
    return 0.0 if TWO_PI - a < 1e-12 else a


@dataclass(frozen=True)
class PortPair:
    """Two rim ports, diametrically opposed; ``angle`` locates the first one."""

    angle: float
    layer: Layer = Layer.BOTTOM

    def __post_init__(self):
        object.__setattr__(self, "angle", _wrap(float(self.angle)))
        object.__setattr__(self, "layer", Layer(self.layer))

    @property
    def partner_angle(self) -> float:
        return _wrap(self.angle + math.pi)

    @property
    def angles(self) -> tuple[float, float]:
        return self.angle, self.partner_angle


@dataclass(frozen=True)
class PerturberSite:
    kind: PerturberKind
    rho: float
    phi: float
    score: float = 0.0
    direction: float = 0.0  # slot axis, ignored for vias
    length: float | None = None
    width: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PerturberKind(self.kind))
        if self.rho < 0.0:
            raise ValueError("site radius must be non-negative")
        if not math.isfinite(self.score):
            raise ValueError("site score must be finite")
        object.__setattr__(self, "phi", _wrap(float(self.phi)))


@dataclass(frozen=True)
class FilterDesign:
    spec: ResonatorSpec
    kind: FilterKind
    input_pair: PortPair
    output_pair: PortPair
    passed_modes: tuple[ModeId, ...]
    suppressed_dm_modes: tuple[ModeId, ...]
    via_sites: tuple[PerturberSite, ...]
    slot_sites: tuple[PerturberSite, ...]
    predicted_passbands: tuple[tuple[float, float], ...]
    predicted_tz: tuple[float, ...]
    reference_axis: float = 0.0
    metadata: dict = field(default_factory=dict, compare=False)

    def rotated(self, alpha: float) -> "FilterDesign":
        """The same design with every port, via, slot and the frame turned by alpha."""

        def turn(site: PerturberSite) -> PerturberSite:
            return replace(site, phi=site.phi + alpha, direction=_wrap(site.direction + alpha))

        return replace(
            self,
            input_pair=PortPair(self.input_pair.angle + alpha, self.input_pair.layer),
            output_pair=PortPair(self.output_pair.angle + alpha, self.output_pair.layer),
            via_sites=tuple(turn(s) for s in self.via_sites),
            slot_sites=tuple(turn(s) for s in self.slot_sites),
            reference_axis=_wrap(self.reference_axis + alpha),
            metadata=dict(self.metadata),
        )


def default_orientation(mode: ModeId) -> Orientation:
    if mode.n == 0 or mode.parity is Parity.EVEN:
        return Orientation.COSINE
    return Orientation.SINE


def _orient(modes: Iterable[ModeId], rule: OrientationRule | None) -> list[ModeId]:
    rule = rule or default_orientation
    return [m.with_orientation(rule(m)) for m in modes]


def excited_parity(excitation: Excitation) -> Parity:
    """DM drives odd-n modes, CM drives even-n modes."""
    return Parity.ODD if Excitation(excitation) is Excitation.DM else Parity.EVEN


def excitable_modes(spec: ResonatorSpec, excitation: Excitation, f_max: float) -> list[SpectrumEntry]:
    want = excited_parity(excitation)
    return [e for e in spectrum(spec, f_max) if e.mode.parity is want]


def port_coupling(
    spec: ResonatorSpec, mode: ModeId, pair: PortPair, excitation: Excitation, *, axis: float = 0.0
) -> complex:
    """Overlap of a balanced drive with the mode's rim E_z.

    DM weights the two ports with (+1, -1)/2, CM with (+1, +1)/2.
    """
    a, b = pair.angles
    fa = field_at(spec, mode, spec.radius, a - axis, normalized=True).e_z
    fb = field_at(spec, mode, spec.radius, b - axis, normalized=True).e_z
    if Excitation(excitation) is Excitation.DM:
        return complex(0.5 * (fa - fb))
    return complex(0.5 * (fa + fb))


def rim_level(mode: ModeId, angle: float) -> float:
    """|E_z(R, angle)| relative to the mode's rim maximum."""
    arg = mode.n * angle
    return abs(math.sin(arg) if mode.orientation is Orientation.SINE else math.cos(arg))


def _null_angles(mode: ModeId) -> list[float]:
    """Exact rim nulls in [0, pi)."""
    n = mode.n
    if mode.orientation is Orientation.SINE:
        return [k * math.pi / n for k in range(n)]
    return [(2 * k + 1) * math.pi / (2 * n) for k in range(n)]


def solve_output_angle(
    pass_modes: Sequence[ModeId],
    suppress_modes: Sequence[ModeId],
    orientation_rule: OrientationRule | None = None,
    min_pass_level: float = DEFAULT_MIN_PASS_LEVEL,
) -> list[float]:
    """Port-pair angles in [0, pi) that null every suppressed mode on the rim
    while each passed mode keeps at least ``min_pass_level`` of its rim peak.

    Raises UnsatisfiableError when the constraints are contradictory on their
    face (a TM_0i mode to suppress, a mode both passed and suppressed, nothing
    to suppress).  An empty list means the search itself came up dry.
    """
    passed = _orient(pass_modes, orientation_rule)
    suppressed = _orient(suppress_modes, orientation_rule)
    if not suppressed:
        raise UnsatisfiableError("no mode to suppress; every angle qualifies")
    if {(m.n, m.i) for m in passed} & {(m.n, m.i) for m in suppressed}:
        raise UnsatisfiableError("a mode cannot be both passed and suppressed")
    for m in suppressed:
        if m.n == 0:
            raise UnsatisfiableError(f"{m.name} is azimuthally constant and has no rim null")
    if not 0.0 <= min_pass_level <= 1.0:
        raise ValueError("min_pass_level must lie in [0, 1]")

    candidates = _null_angles(suppressed[0])
    for m in suppressed[1:]:
        others = _null_angles(m)
        candidates = [a for a in candidates if any(abs(a - b) < _ANGLE_MATCH for b in others)]
    return [a for a in candidates if all(rim_level(m, a) >= min_pass_level for m in passed)]


def _lowest_mode_sets(rule: OrientationRule | None):
    dm = _orient([TM11, TM31], rule)
    cm = _orient([TM21, TM01], rule)
    return dm, cm


def via_score(
    spec: ResonatorSpec,
    site: tuple[float, float],
    dm_modes: Sequence[ModeId] | None = None,
    cm_modes: Sequence[ModeId] | None = None,
    *,
    weight: float = 1.0,
    axis: float = 0.0,
) -> float:
    """sum_cm |E_z|^2 - weight * sum_dm |E_z|^2 at ``site = (rho, phi)``.

    Each mode is scaled to unit peak |E_z|.  A via should sit where the CM
    (even) modes are strong and the DM (odd) modes vanish, so higher is better.
    Defaults to the lowest four modes under the default orientation rule.
    ``rho`` and ``phi`` may be arrays; they broadcast.
    """
    rho, phi = site
    default_dm, default_cm = _lowest_mode_sets(None)
    dm_modes = default_dm if dm_modes is None else dm_modes
    cm_modes = default_cm if cm_modes is None else cm_modes
    local = np.asarray(phi, dtype=float) - axis

    def power(modes):
        return sum(np.abs(field_at(spec, m, rho, local, normalized=True).e_z) ** 2 for m in modes)

    return _as_score(power(cm_modes) - weight * power(dm_modes))


def _as_score(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _perpendicular_current(spec, mode, rho, phi, slot_axis):
    k = surface_current(spec, mode, rho, phi, normalized=True)
    kx, ky = k.cartesian()
    return -kx * np.sin(slot_axis) + ky * np.cos(slot_axis)


def slot_score(
    spec: ResonatorSpec,
    site: tuple[float, float],
    slot_axis: float | None = None,
    strengthen: ModeId | None = None,
    protect: ModeId | None = None,
    *,
    axis: float = 0.0,
) -> float:
    """|K_perp(strengthen)|^2 - |K_perp(protect)|^2 for a slot at ``site``.

    K_perp is the unit-peak-normalised surface current across the slot axis
    (``slot_axis`` is an absolute direction; radial when omitted).  Defaults
    target TM31 against TM11, both sine-oriented.
    """
    rho, phi = site
    strengthen = TM31.with_orientation(Orientation.SINE) if strengthen is None else strengthen
    protect = TM11.with_orientation(Orientation.SINE) if protect is None else protect
    if (strengthen.n, strengthen.i, strengthen.orientation) == (protect.n, protect.i, protect.orientation):
        raise ValueError("strengthen and protect must be different modes")
    phi = np.asarray(phi, dtype=float)
    direction = phi if slot_axis is None else np.asarray(slot_axis, dtype=float)
    local_phi, local_dir = phi - axis, direction - axis
    gain = _perpendicular_current(spec, strengthen, rho, local_phi, local_dir)
    loss = _perpendicular_current(spec, protect, rho, local_phi, local_dir)
    return _as_score(np.abs(gain) ** 2 - np.abs(loss) ** 2)


def _null_diameter(dm_modes: Sequence[ModeId]) -> float:
    """An angle in [0, pi) where every DM mode has a rim null."""
    odd = [m for m in dm_modes if m.n > 0]
    if not odd:
        return 0.0
    common = _null_angles(odd[0])
    for m in odd[1:]:
        others = _null_angles(m)
        common = [a for a in common if any(abs(a - b) < _ANGLE_MATCH for b in others)]
    if not common:
        raise UnsatisfiableError("the DM modes share no null diameter for vias")
    return common[0]


def via_sites(
    spec: ResonatorSpec,
    count: int,
    dm_modes: Sequence[ModeId] | None = None,
    cm_modes: Sequence[ModeId] | None = None,
    *,
    rim_clearance: float = 0.1,
    min_spacing: float = 0.25,
    samples: int = 361,
    weight: float = 1.0,
    axis: float = 0.0,
) -> list[PerturberSite]:
    """Via positions on the diameter where all DM modes vanish.

    Sites keep the 180-degree symmetry of the balanced structure: an odd count
    puts one via at the centre, the rest come in opposed pairs.  Pair radii
    are taken greedily by ``via_score`` over (0, (1 - rim_clearance) R],
    each at least ``min_spacing * R`` from radii already chosen.
    """
    if count < 1:
        raise ValueError("via count must be positive")
    default_dm, default_cm = _lowest_mode_sets(None)
    dm_modes = default_dm if dm_modes is None else list(dm_modes)
    cm_modes = default_cm if cm_modes is None else list(cm_modes)
    base = _null_diameter(dm_modes) + axis
    R = spec.radius

    def score(rho, phi):
        return via_score(spec, (rho, phi), dm_modes, cm_modes, weight=weight, axis=axis)

    sites = []
    taken = []
    if count % 2:
        sites.append(PerturberSite(PerturberKind.VIA, 0.0, base, score(0.0, base)))
        taken.append(0.0)
    t = np.linspace(0.0, 1.0 - rim_clearance, samples)[1:]
    rho_grid = t * R
    s_grid = score(rho_grid, base)
    order = np.argsort(-s_grid, kind="stable")
    for _ in range(count // 2):
        for idx in order:
            r = rho_grid[idx]
            if all(abs(r - q) >= min_spacing * R for q in taken):
                break
        else:
            raise UnsatisfiableError(f"cannot fit {count} vias at spacing {min_spacing} R")
        taken.append(r)
        for ang in (base, base + math.pi):
            sites.append(PerturberSite(PerturberKind.VIA, float(r), ang, float(s_grid[idx])))
    return sites


def slot_sites(
    spec: ResonatorSpec,
    length: float | None = None,
    width: float | None = None,
    strengthen: ModeId | None = None,
    protect: ModeId | None = None,
    *,
    rho: float | None = None,
    step_deg: float = 0.25,
    rel_tol: float = 1e-6,
    axis: float = 0.0,
) -> list[PerturberSite]:
    """Radial slots at every azimuth where ``slot_score`` attains its maximum.

    The slot centre sits at ``R - length/2`` when a length is given, otherwise
    at 0.95 R.  Length and width are carried through as metadata only.
    """
    if rho is None:
        rho = spec.radius - 0.5 * length if length else 0.95 * spec.radius
    if not 0.0 < rho <= spec.radius:
        raise ValueError("slot centre must lie inside the patch")
    steps = int(round(360.0 / step_deg))
    phis = axis + np.arange(steps) * (TWO_PI / steps)
    scores = slot_score(spec, (rho, phis), None, strengthen, protect, axis=axis)
    best = scores.max()
    is_peak = (scores >= np.roll(scores, 1)) & (scores >= np.roll(scores, -1))
    chosen = np.nonzero(is_peak & (scores >= best - rel_tol * abs(best)))[0]
    return [
        PerturberSite(
            PerturberKind.SLOT, float(rho), float(phis[k]), float(scores[k]),
            direction=float(phis[k]), length=length, width=width,
        )
        for k in chosen
    ]


def _pick_angle(candidates: list[float], prefer: float | None) -> float:
    if not candidates:
        raise UnsatisfiableError("no output-port angle satisfies the null and pass constraints")
    if prefer is None:
        return candidates[0]
    return min(candidates, key=lambda a: abs(a - prefer))


def _fitted(spec: ResonatorSpec, f_target: float) -> ResonatorSpec:
    if not f_target > 0.0:
        raise ValueError("target frequency must be positive")
    return ResonatorSpec(spec.radius, fit_eps_eff(spec.radius, TM11, f_target))


def _mode_sets(spec: ResonatorSpec, rule: OrientationRule | None):
    # the four lowest modes: everything up to TM31
    top = resonant_frequency(spec, TM31) * (1.0 + 1e-9)
    dm = _orient([e.mode for e in excitable_modes(spec, Excitation.DM, top)], rule)
    cm = _orient([e.mode for e in excitable_modes(spec, Excitation.CM, top)], rule)
    return dm, cm


def _tz_mode(cm: list[ModeId]) -> ModeId:
    # the lowest DM-restrained even mode with an azimuthal pattern
    return min((m for m in cm if m.n > 0), key=lambda m: (m.n, m.i))


def design_single_band(
    spec: ResonatorSpec,
    f_target: float,
    *,
    fbw: float = 0.157,
    orientation_rule: OrientationRule | None = None,
    min_pass_level: float = DEFAULT_MIN_PASS_LEVEL,
    prefer_angle: float | None = None,
    via_count: int = 3,
    metadata: dict | None = None,
) -> FilterDesign:
    """TM11-only passband; the output pair sits on a TM31 rim null.

    ``spec.eps_eff`` is refitted so that TM11 lands on ``f_target``.
    """
    fitted = _fitted(spec, f_target)
    dm, cm = _mode_sets(fitted, orientation_rule)
    tm11 = next(m for m in dm if (m.n, m.i) == (1, 1))
    tm31 = next(m for m in dm if (m.n, m.i) == (3, 1))
    angle = _pick_angle(
        solve_output_angle([tm11], [tm31], orientation_rule, min_pass_level), prefer_angle
    )
    tz = resonant_frequency(fitted, _tz_mode(cm))
    return FilterDesign(
        spec=fitted,
        kind=FilterKind.SINGLE,
        input_pair=PortPair(INPUT_ANGLE, Layer.TOP),
        output_pair=PortPair(angle, Layer.BOTTOM),
        passed_modes=(tm11,),
        suppressed_dm_modes=tuple(cm) + (tm31,),
        via_sites=tuple(via_sites(fitted, via_count, dm, cm)),
        slot_sites=(),
        predicted_passbands=((resonant_frequency(fitted, tm11), fbw),),
        predicted_tz=(tz,),
        metadata=dict(metadata or {}),
    )


def design_dual_band(
    spec: ResonatorSpec,
    f_target: float,
    *,
    fbws: tuple[float, float] = (0.110, 0.048),
    slot_length: float | None = None,
    slot_width: float | None = None,
    orientation_rule: OrientationRule | None = None,
    min_pass_level: float = DEFAULT_MIN_PASS_LEVEL,
    prefer_angle: float | None = None,
    via_count: int = 5,
    metadata: dict | None = None,
) -> FilterDesign:
    """TM11 and TM31 passbands; the output pair sits on a TM21 rim null.

    Slots are placed where TM31 current crosses them much more strongly than
    TM11 current.  Their frequency pulling is not modelled, so the second
    passband is predicted at the unloaded TM31 frequency.
    """
    fitted = _fitted(spec, f_target)
    dm, cm = _mode_sets(fitted, orientation_rule)
    tm11 = next(m for m in dm if (m.n, m.i) == (1, 1))
    tm31 = next(m for m in dm if (m.n, m.i) == (3, 1))
    tz_mode = _tz_mode(cm)
    angle = _pick_angle(
        solve_output_angle([tm11, tm31], [tz_mode], orientation_rule, min_pass_level), prefer_angle
    )
    return FilterDesign(
        spec=fitted,
        kind=FilterKind.DUAL,
        input_pair=PortPair(INPUT_ANGLE, Layer.TOP),
        output_pair=PortPair(angle, Layer.BOTTOM),
        passed_modes=(tm11, tm31),
        suppressed_dm_modes=tuple(cm),
        via_sites=tuple(via_sites(fitted, via_count, dm, cm)),
        slot_sites=tuple(slot_sites(fitted, slot_length, slot_width, tm31, tm11)),
        predicted_passbands=(
            (resonant_frequency(fitted, tm11), fbws[0]),
            (resonant_frequency(fitted, tm31), fbws[1]),
        ),
        predicted_tz=(resonant_frequency(fitted, tz_mode),),
        metadata=dict(metadata or {}),
    )
