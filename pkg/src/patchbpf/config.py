"""Flat ``key = value`` run configuration with command-line overrides."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .modal import TM11, ModeId, ResonatorSpec, fit_eps_eff

__all__ = ["ConfigError", "RunConfig", "parse_pairs", "PRESETS", "parse_config_text", "load_config", "preset_text"]

PRESETS = {"single": "single_band.cfg", "dual": "dual_band.cfg"}


class ConfigError(ValueError):
    """Malformed or incomplete run configuration."""


def parse_pairs(text: str) -> tuple[tuple[float, float], ...]:
    """``"4.735e9:10, 7.46e9:10"`` -> ((4.735e9, 10.0), (7.46e9, 10.0))"""
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, sep, b = chunk.partition(":")
        if not sep:
            raise ConfigError(f"expected 'value:value', got {chunk!r}")
        out.append((float(a), float(b)))
    return tuple(out)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


@dataclass
class RunConfig:
    # resonator
    radius: float | None = None
    eps_eff: float | None = None
    fit_mode: str | None = None
    fit_freq: float | None = None
    # spectrum / fields
    fmax: float | None = None
    mode: str | None = None
    orientation: str = "cos"
    n_rho: int = 41
    n_phi: int = 144
    # design
    kind: str | None = None
    f_target: float | None = None
    fbw: float | None = None
    fbw2: float | None = None
    via_count: int | None = None
    slot_length: float | None = None
    slot_width: float | None = None
    min_pass_level: float = 0.5
    # coupling
    fp1: float | None = None
    fp2: float | None = None
    f0: float | None = None
    k: float | None = None
    sign: int = 1
    # sweep
    f_start: float = 1e9
    f_stop: float = 8e9
    n_points: int = 1001
    bands: tuple[tuple[float, float], ...] | None = None
    tz: tuple[float, ...] | None = None
    cm_resonances: tuple[tuple[float, float], ...] | None = None
    notch_q: float = 10.0
    cm_q: float = 50.0
    cm_attenuation_db: float = 10.0
    # io
    design: str | None = None
    out: str | None = None
    metadata: dict = field(default_factory=dict)

    def resonator(self) -> ResonatorSpec:
        if self.radius is None:
            raise ConfigError("radius is required (--radius or 'radius =' in the config)")
        if self.eps_eff is not None:
            return ResonatorSpec(self.radius, self.eps_eff)
        if self.fit_freq is not None:
            mode = ModeId.parse(self.fit_mode) if self.fit_mode else TM11
            return ResonatorSpec(self.radius, fit_eps_eff(self.radius, mode, self.fit_freq))
        raise ConfigError("give eps_eff, or fit_freq (optionally fit_mode) to fit it")

    def sweep_dict(self) -> dict:
        keys = ("f_start", "f_stop", "n_points", "bands", "tz", "cm_resonances",
                "notch_q", "cm_q", "cm_attenuation_db")
        out = {}
        for k in keys:
            v = getattr(self, k)
            if isinstance(v, tuple):
                v = [list(x) if isinstance(x, tuple) else x for x in v]
            out[k] = v
        return out


_CONVERTERS = {
    "bands": parse_pairs,
    "cm_resonances": parse_pairs,
    "tz": _floats,
}
_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig) if f.name != "metadata"}


def _convert(key: str, raw: str):
    if key in _CONVERTERS:
        return _CONVERTERS[key](raw)
    ann = str(_FIELDS[key].type)
    try:
        if ann.startswith("int"):
            return int(raw)
        if ann.startswith("float"):
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot convert {raw!r}") from exc
    return raw


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, ``meta.*`` keys are free-form."""
    values: dict = {}
    meta: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if key.startswith("meta."):
            name = key[5:]
            try:
                meta[name] = float(val)
            except ValueError:
                meta[name] = val
            continue
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, val)
    if meta:
        values["metadata"] = meta
    return values


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return resources.files("patchbpf").joinpath("presets", PRESETS[name]).read_text()


def load_config(preset: str | None = None, path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Preset, then config file, then explicit overrides (``None`` values skipped)."""
    merged: dict = {}
    meta: dict = {}
    layers = []
    if preset:
        layers.append(parse_config_text(preset_text(preset), f"preset:{preset}"))
    if path:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {path}")
        layers.append(parse_config_text(p.read_text(), str(p)))
    for layer in layers:
        meta.update(layer.pop("metadata", {}))
        merged.update(layer)
    for key, val in (overrides or {}).items():
        if val is not None:
            merged[key] = val
    cfg = RunConfig(**merged)
    cfg.metadata = meta
    return cfg
