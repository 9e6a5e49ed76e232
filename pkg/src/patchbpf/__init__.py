"""Balanced bandpass filters on a circular patch resonator.

Cavity-model modes, field patterns, port and perturber placement, and an
approximate coupled-resonator response model.
"""
__version__ = "0.1.0"

from .specfun import (
    BesselDomainError,
    PrimeRootTable,
    RootSearchError,
    bessel_j,
    bessel_j_prime,
    bessel_j_prime2,
    prime_root,
    prime_roots,
)
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
    cutoff_wavenumber,
    fit_eps_eff,
    parity,
    resonant_frequency,
    spectrum,
)
from .fields import (
    FieldDomainError,
    FieldMap,
    FieldPoint,
    SurfaceCurrent,
    azimuthal_lobes,
    field_at,
    field_map,
    mode_peak,
    rim_nulls,
    surface_current,
)
from .balanced_design import (
    Excitation,
    FilterDesign,
    FilterKind,
    Layer,
    PerturberKind,
    PerturberSite,
    PortPair,
    UnsatisfiableError,
    design_dual_band,
    design_single_band,
    excitable_modes,
    port_coupling,
    slot_score,
    slot_sites,
    solve_output_angle,
    via_score,
    via_sites,
)
from .coupling import (
    BandOverlapError,
    BandSection,
    CouplingResult,
    MixedModeSParams,
    SweepConfig,
    band_section_from_spec,
    cm_response,
    coupling_from_split,
    dm_response,
    passband_metrics,
    split_from_coupling,
    sweep,
)
