"""Command-line front end: ``patchbpf <command> [options]``.

Exit status is 0 on success, 1 for invalid input, 2 for numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .balanced_design import design_dual_band, design_single_band
from .config import ConfigError, RunConfig, load_config, parse_pairs
from .coupling import SweepConfig, coupling_from_split, passband_metrics, split_from_coupling, sweep
from .fields import azimuthal_lobes, field_map, rim_nulls
from .fileio import (
    atomic_write,
    design_from_json,
    design_to_json,
    format_design_report,
    format_fieldmap_csv,
    format_sparams_csv,
    format_touchstone,
)
from .modal import TM11, ModeId, ResonatorSpec, resonant_frequency, spectrum
from .specfun import RootSearchError

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--preset", choices=("single", "dual"), help="start from a bundled preset")
    p.add_argument("--radius", type=float, help="effective patch radius in metres")
    p.add_argument("--eps-eff", dest="eps_eff", type=float, help="effective relative permittivity")
    p.add_argument("--fit-mode", dest="fit_mode", help="mode to fit eps_eff against, e.g. 1,1")
    p.add_argument("--fit-freq", dest="fit_freq", type=float, help="measured frequency of --fit-mode (Hz)")
    p.add_argument("--out", help="output file, prefix or directory (command dependent)")


def _sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--f-start", dest="f_start", type=float)
    p.add_argument("--f-stop", dest="f_stop", type=float)
    p.add_argument("--n-points", dest="n_points", type=int)
    p.add_argument("--cm-resonances", dest="cm_resonances",
                   help="comma list of freq_hz:attenuation_db")


def _design_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=("single", "dual"))
    p.add_argument("--f-target", dest="f_target", type=float, help="TM11 target frequency (Hz)")
    p.add_argument("--fbw", type=float, help="fractional bandwidth of the first passband")
    p.add_argument("--fbw2", type=float, help="fractional bandwidth of the second passband")
    p.add_argument("--slot-length", dest="slot_length", type=float)
    p.add_argument("--slot-width", dest="slot_width", type=float)
    p.add_argument("--via-count", dest="via_count", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="patchbpf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="TM-mode spectrum table")
    _common(p)
    p.add_argument("--fmax", type=float, help="highest frequency to list (Hz); default 2.5 f(TM11)")

    p = sub.add_parser("fieldmap", help="sampled fields of one mode as CSV")
    _common(p)
    p.add_argument("--mode", required=False, help="mode as n,i (e.g. 3,1)")
    p.add_argument("--orientation", choices=("cos", "sin"))
    p.add_argument("--n-rho", dest="n_rho", type=int)
    p.add_argument("--n-phi", dest="n_phi", type=int)

    p = sub.add_parser("nulls", help="rim angles where E_z of a mode vanishes")
    _common(p)
    p.add_argument("--mode", help="mode as n,i")
    p.add_argument("--orientation", choices=("cos", "sin"))

    p = sub.add_parser("design", help="single- or dual-band balanced design")
    _common(p)
    _design_flags(p)

    p = sub.add_parser("coupling", help="coupling coefficient from split peaks, or the inverse")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--fp1", type=float, help="lower split peak (Hz)")
    p.add_argument("--fp2", type=float, help="upper split peak (Hz)")
    p.add_argument("--f0", type=float, help="centre frequency for the inverse (Hz)")
    p.add_argument("--k", type=float, help="coupling magnitude for the inverse")
    p.add_argument("--sign", type=int, choices=(1, -1))

    p = sub.add_parser("sparams", help="mixed-mode response sweep (Touchstone + CSV)")
    _common(p)
    _design_flags(p)
    _sweep_flags(p)
    p.add_argument("--design", help="design JSON written by 'design' or 'report'")

    p = sub.add_parser("report", help="full design dossier in a directory")
    _common(p)
    _design_flags(p)
    _sweep_flags(p)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "config", "preset"}
    overrides = {k: v for k, v in vars(args).items() if k not in skip}
    if isinstance(overrides.get("cm_resonances"), str):
        overrides["cm_resonances"] = parse_pairs(overrides["cm_resonances"])
    return load_config(getattr(args, "preset", None), getattr(args, "config", None), overrides)


def _mode(cfg: RunConfig) -> ModeId:
    if not cfg.mode:
        raise ConfigError("--mode is required, e.g. --mode 3,1")
    return ModeId.parse(cfg.mode, cfg.orientation)


def _design(cfg: RunConfig):
    if cfg.radius is None:
        raise ConfigError("radius is required")
    if cfg.f_target is None:
        raise ConfigError("f_target is required (TM11 target frequency)")
    spec = ResonatorSpec(cfg.radius, cfg.eps_eff or 1.0)
    kind = cfg.kind or "single"
    if kind == "single":
        kw = {"metadata": cfg.metadata}
        if cfg.fbw is not None:
            kw["fbw"] = cfg.fbw
        if cfg.via_count is not None:
            kw["via_count"] = cfg.via_count
        return design_single_band(spec, cfg.f_target, min_pass_level=cfg.min_pass_level, **kw)
    if kind == "dual":
        kw = {"metadata": cfg.metadata, "slot_length": cfg.slot_length, "slot_width": cfg.slot_width}
        kw["fbws"] = (cfg.fbw if cfg.fbw is not None else 0.110, cfg.fbw2 if cfg.fbw2 is not None else 0.048)
        if cfg.via_count is not None:
            kw["via_count"] = cfg.via_count
        return design_dual_band(spec, cfg.f_target, min_pass_level=cfg.min_pass_level, **kw)
    raise ConfigError(f"kind must be 'single' or 'dual', got {kind!r}")


def _sweep_config(cfg: RunConfig) -> SweepConfig:
    return SweepConfig(
        f_start=cfg.f_start,
        f_stop=cfg.f_stop,
        n_points=cfg.n_points,
        bands=cfg.bands,
        tz=cfg.tz,
        cm_resonances=cfg.cm_resonances,
        notch_q=cfg.notch_q,
        cm_q=cfg.cm_q,
        cm_attenuation_db=cfg.cm_attenuation_db,
    )


def _spectrum_rows(spec: ResonatorSpec, fmax: float):
    f11 = resonant_frequency(spec, TM11)
    return [(e, e.freq / f11) for e in spectrum(spec, fmax)]


def _spectrum_csv(rows) -> str:
    lines = ["mode,n,i,degeneracy,freq_hz,f_over_f11"]
    for e, r in rows:
        lines.append(f"{e.mode.name},{e.mode.n},{e.mode.i},{e.degeneracy},{e.freq!r},{r!r}")
    return "\n".join(lines) + "\n"


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = cfg.resonator()
    fmax = cfg.fmax if cfg.fmax is not None else 2.5 * resonant_frequency(spec, TM11)
    rows = _spectrum_rows(spec, fmax)
    print(f"# R = {spec.radius * 1e3:.4f} mm, eps_eff = {spec.eps_eff:.6f}, fmax = {fmax:.6g} Hz")
    print(f"{'mode':<6s} {'n':>2s} {'i':>2s} {'deg':>3s} {'f (Hz)':>16s} {'f/f11':>8s}")
    for e, r in rows:
        print(f"{e.mode.name:<6s} {e.mode.n:>2d} {e.mode.i:>2d} {e.degeneracy:>3d} {e.freq:>16.6f} {r:>8.4f}")
    if not rows:
        print("warning: no modes below fmax", file=sys.stderr)
    if cfg.out:
        atomic_write(cfg.out, _spectrum_csv(rows))
    return EXIT_OK


def cmd_fieldmap(cfg: RunConfig) -> int:
    spec = cfg.resonator()
    mode = _mode(cfg)
    fmap = field_map(spec, mode, cfg.n_rho, cfg.n_phi)
    print(f"{mode}: grid {fmap.shape[0]} x {fmap.shape[1]}, rim lobes {azimuthal_lobes(fmap)}")
    if cfg.out:
        atomic_write(cfg.out, format_fieldmap_csv(fmap))
        print(f"wrote {cfg.out}")
    return EXIT_OK


def cmd_nulls(cfg: RunConfig) -> int:
    spec = cfg.resonator() if cfg.radius is not None else ResonatorSpec(1.0)
    mode = _mode(cfg)
    angles = rim_nulls(spec, mode)
    print(f"{mode} rim nulls (deg): " + ", ".join(f"{math.degrees(a):.6f}" for a in angles))
    if cfg.out:
        atomic_write(cfg.out, "phi_rad,phi_deg\n" + "".join(f"{a!r},{math.degrees(a)!r}\n" for a in angles))
    return EXIT_OK


def cmd_design(cfg: RunConfig) -> int:
    design = _design(cfg)
    print(format_design_report(design), end="")
    if cfg.out:
        atomic_write(cfg.out, design_to_json(design, cfg.sweep_dict()))
    return EXIT_OK


def cmd_coupling(cfg: RunConfig) -> int:
    if cfg.fp1 is not None and cfg.fp2 is not None:
        res = coupling_from_split(cfg.fp1, cfg.fp2, cfg.sign)
        print(f"k = {res.k:.6f}")
        return EXIT_OK
    if cfg.f0 is not None and cfg.k is not None:
        lo, hi = split_from_coupling(cfg.f0, cfg.k)
        print(f"fp1 = {lo:.6f} Hz\nfp2 = {hi:.6f} Hz")
        return EXIT_OK
    raise ConfigError("give --fp1 and --fp2, or --f0 and --k")


def _write_sweep(prefix: str, sp, title: str) -> list[Path]:
    comments = [title, "approximate coupled-resonator model"]
    return [
        atomic_write(f"{prefix}.s2p", format_touchstone(sp, comments)),
        atomic_write(f"{prefix}.csv", format_sparams_csv(sp)),
    ]


def _summarise(sp) -> None:
    for k, b in enumerate(passband_metrics(sp.freqs, sp.s_dd21), start=1):
        print(f"DM passband {k}: centre {b['center'] / 1e9:.4f} GHz, 3-dB FBW {100 * b['fbw']:.2f} %")


def cmd_sparams(cfg: RunConfig, explicit: dict) -> int:
    if cfg.design:
        design, stored = design_from_json(Path(cfg.design).read_text())
        if stored:
            # stored sweep settings apply unless a flag overrides them
            base = {k: (tuple(tuple(x) if isinstance(x, list) else x for x in v) if isinstance(v, list) else v)
                    for k, v in stored.items()}
            base.update({k: v for k, v in explicit.items() if k in base and v is not None})
            for k, v in base.items():
                setattr(cfg, k, v)
    else:
        design = _design(cfg)
    sp = sweep(design, _sweep_config(cfg))
    _summarise(sp)
    prefix = cfg.out or "sparams"
    for path in _write_sweep(prefix, sp, f"{design.kind.value}-band design"):
        print(f"wrote {path}")
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    design = _design(cfg)
    out = Path(cfg.out or f"report_{design.kind.value}")
    sp = sweep(design, _sweep_config(cfg))
    spec_rows = _spectrum_rows(design.spec, 2.5 * resonant_frequency(design.spec, TM11))
    title = f"{design.kind.value}-band balanced filter dossier"
    text = format_design_report(design, title)
    text += "\nsynthesised DM passbands (approximate model):\n"
    for k, b in enumerate(passband_metrics(sp.freqs, sp.s_dd21), start=1):
        text += f"  band {k}: centre {b['center']:.6g} Hz, 3-dB FBW {b['fbw']:.4f}\n"
    text += "\nmode spectrum:\n"
    for e, r in spec_rows:
        text += f"  {e.mode.name:<5s} {e.freq / 1e9:8.4f} GHz  f/f11 {r:.4f}  {e.mode.parity.value}\n"
    written = [
        atomic_write(out / "design.txt", text),
        atomic_write(out / "design.json", design_to_json(design, cfg.sweep_dict())),
        atomic_write(out / "spectrum.csv", _spectrum_csv(spec_rows)),
    ]
    written += _write_sweep(str(out / "sparams"), sp, title)
    print(text, end="")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "fieldmap":
            return cmd_fieldmap(cfg)
        if args.command == "nulls":
            return cmd_nulls(cfg)
        if args.command == "design":
            return cmd_design(cfg)
        if args.command == "coupling":
            return cmd_coupling(cfg)
        if args.command == "sparams":
            return cmd_sparams(cfg, vars(args))
        if args.command == "report":
            return cmd_report(cfg)
    except (RootSearchError, ArithmeticError) as exc:
        print(f"patchbpf: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"patchbpf: {exc}", file=sys.stderr)
        return EXIT_INVALID
    parser.error(f"unknown command {args.command}")
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
