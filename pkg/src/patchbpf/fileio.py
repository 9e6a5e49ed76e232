"""Touchstone / CSV export, design (de)serialisation and text reports."""
from __future__ import annotations

import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .balanced_design import (
    FilterDesign,
    FilterKind,
    Layer,
    PerturberKind,
    PerturberSite,
    PortPair,
)
from .coupling import BUTTERWORTH_G, MixedModeSParams, band_section_from_spec
from .fields import FieldMap, write_fieldmap_csv
from .modal import ModeId, Orientation, ResonatorSpec

__all__ = [
    "SPARAMS_CSV_HEADER",
    "DESIGN_FORMAT",
    "atomic_write",
    "format_touchstone",
    "read_touchstone",
    "format_sparams_csv",
    "format_fieldmap_csv",
    "design_to_dict",
    "design_from_dict",
    "design_to_json",
    "design_from_json",
    "format_design_report",
]

SPARAMS_CSV_HEADER = "freq_hz,sdd11_re,sdd11_im,sdd21_re,sdd21_im,scc21_re,scc21_im"
DESIGN_FORMAT = "patchbpf-design/1"

_FREQ_SCALE = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}


def atomic_write(path, text: str) -> Path:
    """Write ``text`` next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _e9(x: float) -> str:
    return f"{x:.8e}"


def format_touchstone(sp: MixedModeSParams, comments: list[str] | None = None) -> str:
    """Two-port Touchstone text for the differential path (S21 = S12, S22 = S11)."""
    lines = [f"! {c}" for c in (comments or [])]
    lines.append("! differential-mode pair; common-mode data is in the CSV export")
    lines.append("# Hz S RI R 50")
    for f, s11, s21 in zip(sp.freqs, sp.s_dd11, sp.s_dd21):
        vals = [s11, s21, s21, s11]
        lines.append(" ".join([_e9(f)] + [f"{_e9(v.real)} {_e9(v.imag)}" for v in vals]))
    return "\n".join(lines) + "\n"


def read_touchstone(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Parse 2-port Touchstone v1 text.  Returns (freqs in Hz, S with shape (N, 2, 2))."""
    unit, fmt = "GHZ", "MA"
    tokens: list[float] = []
    for raw in text.splitlines():
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            opts = line[1:].upper().split()
            for o in opts:
                if o in _FREQ_SCALE:
                    unit = o
                elif o in ("RI", "MA", "DB"):
                    fmt = o
            if "S" not in opts:
                raise ValueError("only S-parameter Touchstone files are supported")
            continue
        tokens.extend(float(t) for t in line.split())
    if len(tokens) % 9:
        raise ValueError("data length is not a whole number of 2-port records")
    data = np.array(tokens).reshape(-1, 9)
    freqs = data[:, 0] * _FREQ_SCALE[unit]
    a, b = data[:, 1::2], data[:, 2::2]
    if fmt == "RI":
        vals = a + 1j * b
    elif fmt == "MA":
        vals = a * np.exp(1j * np.radians(b))
    else:
        vals = 10.0 ** (a / 20.0) * np.exp(1j * np.radians(b))
    # record order is S11 S21 S12 S22
    s = np.empty((len(freqs), 2, 2), dtype=complex)
    s[:, 0, 0], s[:, 1, 0], s[:, 0, 1], s[:, 1, 1] = vals.T
    return freqs, s


def format_sparams_csv(sp: MixedModeSParams) -> str:
    out = [SPARAMS_CSV_HEADER]
    for f, a, b, c in zip(sp.freqs, sp.s_dd11, sp.s_dd21, sp.s_cc21):
        out.append(",".join(repr(float(v)) for v in (f, a.real, a.imag, b.real, b.imag, c.real, c.imag)))
    return "\n".join(out) + "\n"


def format_fieldmap_csv(fmap: FieldMap) -> str:
    buf = io.StringIO()
    write_fieldmap_csv(fmap, buf)
    return buf.getvalue()


def _mode_dict(m: ModeId) -> dict:
    return {"n": m.n, "i": m.i, "orientation": m.orientation.value}


def _mode_from(d: dict) -> ModeId:
    return ModeId(int(d["n"]), int(d["i"]), Orientation(d.get("orientation", "cos")))


def _site_dict(s: PerturberSite) -> dict:
    return {
        "kind": s.kind.value,
        "rho_m": s.rho,
        "phi_rad": s.phi,
        "score": s.score,
        "direction_rad": s.direction,
        "length_m": s.length,
        "width_m": s.width,
    }


def _site_from(d: dict) -> PerturberSite:
    return PerturberSite(
        PerturberKind(d["kind"]),
        float(d["rho_m"]),
        float(d["phi_rad"]),
        float(d.get("score", 0.0)),
        float(d.get("direction_rad", 0.0)),
        d.get("length_m"),
        d.get("width_m"),
    )


def _pair_dict(p: PortPair) -> dict:
    return {"angle_rad": p.angle, "angle_deg": math.degrees(p.angle), "layer": p.layer.value}


def design_to_dict(design: FilterDesign, sweep: dict | None = None) -> dict:
    doc = {
        "format": DESIGN_FORMAT,
        "kind": design.kind.value,
        "spec": {"radius_m": design.spec.radius, "eps_eff": design.spec.eps_eff},
        "reference_axis_rad": design.reference_axis,
        "input_pair": _pair_dict(design.input_pair),
        "output_pair": _pair_dict(design.output_pair),
        "passed_modes": [_mode_dict(m) for m in design.passed_modes],
        "suppressed_dm_modes": [_mode_dict(m) for m in design.suppressed_dm_modes],
        "via_sites": [_site_dict(s) for s in design.via_sites],
        "slot_sites": [_site_dict(s) for s in design.slot_sites],
        "predicted_passbands": [{"center_hz": c, "fbw": w} for c, w in design.predicted_passbands],
        "predicted_tz_hz": list(design.predicted_tz),
        "metadata": dict(sorted(design.metadata.items())),
    }
    if sweep is not None:
        doc["sweep"] = sweep
    return doc


def design_from_dict(doc: dict) -> FilterDesign:
    if doc.get("format") != DESIGN_FORMAT:
        raise ValueError(f"not a {DESIGN_FORMAT} document")
    return FilterDesign(
        spec=ResonatorSpec(float(doc["spec"]["radius_m"]), float(doc["spec"]["eps_eff"])),
        kind=FilterKind(doc["kind"]),
        input_pair=PortPair(doc["input_pair"]["angle_rad"], Layer(doc["input_pair"]["layer"])),
        output_pair=PortPair(doc["output_pair"]["angle_rad"], Layer(doc["output_pair"]["layer"])),
        passed_modes=tuple(_mode_from(m) for m in doc["passed_modes"]),
        suppressed_dm_modes=tuple(_mode_from(m) for m in doc["suppressed_dm_modes"]),
        via_sites=tuple(_site_from(s) for s in doc["via_sites"]),
        slot_sites=tuple(_site_from(s) for s in doc["slot_sites"]),
        predicted_passbands=tuple((float(b["center_hz"]), float(b["fbw"])) for b in doc["predicted_passbands"]),
        predicted_tz=tuple(float(z) for z in doc["predicted_tz_hz"]),
        reference_axis=float(doc.get("reference_axis_rad", 0.0)),
        metadata=dict(doc.get("metadata", {})),
    )


def design_to_json(design: FilterDesign, sweep: dict | None = None) -> str:
    return json.dumps(design_to_dict(design, sweep), indent=2) + "\n"


def design_from_json(text: str) -> tuple[FilterDesign, dict | None]:
    doc = json.loads(text)
    return design_from_dict(doc), doc.get("sweep")


def _site_table(sites, title) -> list[str]:
    lines = [f"{title}: {len(sites)}"]
    if not sites:
        return lines
    lines.append("  #  kind   rho_mm    phi_deg   score        length_mm  width_mm")
    for k, s in enumerate(sites, start=1):
        length = "-" if s.length is None else f"{s.length * 1e3:.3f}"
        width = "-" if s.width is None else f"{s.width * 1e3:.3f}"
        lines.append(
            f"  {k:<2d} {s.kind.value:<6s} {s.rho * 1e3:8.3f}  {math.degrees(s.phi):8.3f}  "
            f"{s.score: .4e}  {length:>9s}  {width:>8s}"
        )
    return lines


def format_design_report(design: FilterDesign, title: str | None = None) -> str:
    """Human-readable ``key: value`` summary of a design plus site tables."""
    spec = design.spec
    lines = [title or f"{design.kind.value}-band balanced filter design", ""]
    lines += [
        f"kind: {design.kind.value}",
        f"radius: {spec.radius:.6g} m ({spec.radius * 1e3:.3f} mm)",
        f"eps_eff: {spec.eps_eff:.6f}",
        f"reference_axis: {math.degrees(design.reference_axis):.3f} deg",
        f"input_pair: {math.degrees(design.input_pair.angle):.3f} deg / "
        f"{math.degrees(design.input_pair.partner_angle):.3f} deg ({design.input_pair.layer.value})",
        f"output_angle: {math.degrees(design.output_pair.angle):.3f} deg",
        f"output_pair: {math.degrees(design.output_pair.angle):.3f} deg / "
        f"{math.degrees(design.output_pair.partner_angle):.3f} deg ({design.output_pair.layer.value})",
        "passed_modes: " + ", ".join(str(m) for m in design.passed_modes),
        "suppressed_dm_modes: " + ", ".join(str(m) for m in design.suppressed_dm_modes),
    ]
    for k, (c, w) in enumerate(design.predicted_passbands, start=1):
        sec = band_section_from_spec(c, w)
        lines.append(
            f"passband_{k}: {c:.6g} Hz ({c / 1e9:.4f} GHz), fbw {w:.4f}, "
            f"k {sec.k:.5f}, q_ext {sec.q_ext:.4f}"
        )
    for k, z in enumerate(design.predicted_tz, start=1):
        lines.append(f"tz_{k}: {z:.6g} Hz ({z / 1e9:.4f} GHz)")
    lines.append("prototype: Butterworth order 2, g = " + ", ".join(f"{g:.6f}" for g in BUTTERWORTH_G))
    lines.append("")
    lines += _site_table(design.via_sites, "via_sites")
    lines.append("")
    lines += _site_table(design.slot_sites, "slot_sites")
    if design.metadata:
        lines.append("")
        lines.append("geometry metadata (not used in any computation):")
        for key, val in sorted(design.metadata.items()):
            lines.append(f"  {key}: {val}")
    return "\n".join(lines) + "\n"
