"""Cavity-model fields, surface currents and rim nulls of the TM_ni modes.

The patch is thin, so modes carry no z variation (beta = 0).  Under that
convention the transverse electric field vanishes and only E_z, H_rho and
H_phi survive:

    E_z   = J_n(k_c rho) T(n phi)
    H_rho = (j w eps / k_c^2) (1/rho) dE_z/dphi
    H_phi = -(j w eps / k_c^2) dE_z/drho

with T = cos or sin according to the mode orientation.  The 1/rho factor is
handled through n J_n(x)/x = (J_{n-1}(x) + J_{n+1}(x)) / 2, which is finite at
the centre.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .modal import ModeId, Orientation, ResonatorSpec, cutoff_wavenumber, resonant_frequency
from .specfun import bessel_j, bessel_j_prime, prime_roots

__all__ = [
    "VACUUM_PERMITTIVITY",
    "FIELDMAP_CSV_HEADER",
    "FieldDomainError",
    "FieldPoint",
    "SurfaceCurrent",
    "FieldMap",
    "mode_peak",
    "field_at",
    "surface_current",
    "field_map",
    "rim_nulls",
    "azimuthal_lobes",
    "write_fieldmap_csv",
]

VACUUM_PERMITTIVITY = 8.8541878128e-12

FIELDMAP_CSV_HEADER = (
    "rho_m,phi_rad,Ez_re,Ez_im,Hrho_re,Hrho_im,Hphi_re,Hphi_im,Krho_re,Krho_im,Kphi_re,Kphi_im"
)

_RHO_SLACK = 1e-12


class FieldDomainError(ValueError):
    """Evaluation point outside the patch, or a query with no answer."""


@dataclass(frozen=True)
class FieldPoint:
    """Field components at (rho, phi).  Arrays when evaluated on a grid."""

    rho: np.ndarray | float
    phi: np.ndarray | float
    e_z: np.ndarray | complex
    e_rho: np.ndarray | complex
    e_phi: np.ndarray | complex
    h_rho: np.ndarray | complex
    h_phi: np.ndarray | complex


@dataclass(frozen=True)
class SurfaceCurrent:
    """K = z x H_t, so (K_rho, K_phi) = (-H_phi, H_rho)."""

    rho: np.ndarray | float
    phi: np.ndarray | float
    k_rho: np.ndarray | complex
    k_phi: np.ndarray | complex

    @property
    def magnitude(self):
        return np.sqrt(np.abs(self.k_rho) ** 2 + np.abs(self.k_phi) ** 2)

    def cartesian(self):
        """(K_x, K_y) in the patch plane."""
        c, s = np.cos(self.phi), np.sin(self.phi)
        return self.k_rho * c - self.k_phi * s, self.k_rho * s + self.k_phi * c


def mode_peak(mode: ModeId) -> float:
    """max |J_n(k_c rho)| over 0 <= rho <= R.

    J_n is stationary at 0 and at the roots of J_n', so the peak over
    [0, v_ni] is found among J_n(0), J_n(v_n1), ..., J_n(v_ni).
    """
    candidates = [abs(bessel_j(mode.n, 0.0))]
    candidates += [abs(bessel_j(mode.n, v)) for v in prime_roots(mode.n, mode.i)]
    return max(candidates)


def _trig(mode: ModeId, angle):
    """Azimuthal factor T(n phi) and (1/n) dT/dphi."""
    arg = mode.n * angle
    if mode.orientation is Orientation.SINE:
        return np.sin(arg), np.cos(arg)
    return np.cos(arg), -np.sin(arg)


def _check_rho(spec: ResonatorSpec, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0) or np.any(rho > spec.radius * (1.0 + _RHO_SLACK)):
        raise FieldDomainError(f"rho must lie in [0, R={spec.radius}]")
    return np.minimum(rho, spec.radius)


def _scalarize(value):
    return value.item() if isinstance(value, np.ndarray) and value.ndim == 0 else value


def field_at(
    spec: ResonatorSpec, mode: ModeId, rho, phi, *, normalized: bool = False
) -> FieldPoint:
    """Fields of ``mode`` with unit amplitude E_ni at (rho, phi).

    ``rho`` and ``phi`` broadcast against each other.  With ``normalized``
    every component is divided by the peak |E_z| of the mode over the patch.
    """
    rho = _check_rho(spec, rho)
    phi = np.asarray(phi, dtype=float)
    rho, phi = np.broadcast_arrays(rho, phi)
    k_c = cutoff_wavenumber(spec, mode)
    x = k_c * rho
    n = mode.n

    jn = bessel_j(n, x)
    jnp = bessel_j_prime(n, x)
    if n == 0:
        n_jn_over_x = np.zeros_like(x)
    else:
        # n J_n(x)/x = J_{n-1}(x) - J_n'(x), finite at x = 0 and needs no J_{n+1}
        n_jn_over_x = bessel_j(n - 1, x) - jnp
    trig, dtrig = _trig(mode, phi)

    omega_eps = 2.0 * math.pi * resonant_frequency(spec, mode) * VACUUM_PERMITTIVITY * spec.eps_eff
    scale = 1.0 / mode_peak(mode) if normalized else 1.0

    e_z = (jn * trig * scale).astype(complex)
    h_rho = 1j * omega_eps / k_c * n_jn_over_x * dtrig * scale
    h_phi = -1j * omega_eps / k_c * jnp * trig * scale
    zero = np.zeros_like(e_z)
    return FieldPoint(
        rho=_scalarize(rho),
        phi=_scalarize(phi),
        e_z=_scalarize(e_z),
        e_rho=_scalarize(zero),
        e_phi=_scalarize(zero.copy()),
        h_rho=_scalarize(h_rho),
        h_phi=_scalarize(h_phi),
    )


def surface_current(
    spec: ResonatorSpec, mode: ModeId, rho, phi, *, normalized: bool = False
) -> SurfaceCurrent:
    fp = field_at(spec, mode, rho, phi, normalized=normalized)
    return SurfaceCurrent(rho=fp.rho, phi=fp.phi, k_rho=-fp.h_phi, k_phi=fp.h_rho)


@dataclass(frozen=True)
class FieldMap:
    """Normalised fields on an (n_rho, n_phi) polar grid, ``[i_rho, i_phi]`` indexing."""

    mode: ModeId
    radius: float
    rho: np.ndarray
    phi: np.ndarray
    e_z: np.ndarray
    h_rho: np.ndarray
    h_phi: np.ndarray

    @property
    def k_rho(self):
        return -self.h_phi

    @property
    def k_phi(self):
        return self.h_rho

    @property
    def shape(self):
        return self.e_z.shape

    def rim(self):
        """E_z along rho = R."""
        return self.e_z[-1]


def field_map(spec: ResonatorSpec, mode: ModeId, n_rho: int = 41, n_phi: int = 144) -> FieldMap:
    """Sample ``mode`` on a polar grid scaled so the largest |E_z| is 1.

    rho runs over [0, R] inclusive; phi over [0, 2 pi) with no seam duplicate.
    """
    if n_rho < 2:
        raise FieldDomainError("n_rho must be at least 2")
    if n_phi < 4:
        raise FieldDomainError("n_phi must be at least 4")
    rho = np.linspace(0.0, spec.radius, n_rho)
    phi = np.arange(n_phi) * (2.0 * math.pi / n_phi)
    fp = field_at(spec, mode, rho[:, None], phi[None, :])
    peak = np.max(np.abs(fp.e_z))
    return FieldMap(
        mode=mode,
        radius=spec.radius,
        rho=rho,
        phi=phi,
        e_z=fp.e_z / peak,
        h_rho=fp.h_rho / peak,
        h_phi=fp.h_phi / peak,
    )


def azimuthal_lobes(fmap: FieldMap, rel_floor: float = 1e-9) -> int:
    """Number of sign lobes of E_z around the rim (cyclic)."""
    rim = fmap.rim().real
    keep = np.abs(rim) > rel_floor * np.max(np.abs(rim))
    signs = np.sign(rim[keep])
    if signs.size == 0:
        return 0
    changes = np.count_nonzero(signs != np.roll(signs, 1))
    return max(changes, 1)


def rim_nulls(spec: ResonatorSpec, mode: ModeId, tol: float = 1e-6) -> list[float]:
    """Angles in [0, 2 pi) where E_z vanishes on the rim, ascending.

    The trig zeros are known in closed form; each one is still checked against
    ``tol`` times the rim maximum of |E_z|.
    """
    if mode.n == 0:
        raise FieldDomainError(f"{mode.name} has no azimuthal nulls")
    n = mode.n
    if mode.orientation is Orientation.SINE:
        angles = [k * math.pi / n for k in range(2 * n)]
    else:
        angles = [(2 * k + 1) * math.pi / (2 * n) for k in range(2 * n)]
    rim_peak = abs(bessel_j(n, prime_roots(n, mode.i)[-1]))
    values = np.abs(field_at(spec, mode, spec.radius, np.array(angles)).e_z)
    return [a for a, v in zip(angles, values) if v <= tol * rim_peak]


def write_fieldmap_csv(fmap: FieldMap, fh) -> None:
    """Write one row per grid sample to an open text stream."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(FIELDMAP_CSV_HEADER.split(","))
    k_rho, k_phi = fmap.k_rho, fmap.k_phi
    for a, r in enumerate(fmap.rho):
        for b, p in enumerate(fmap.phi):
            row = [r, p]
            for arr in (fmap.e_z, fmap.h_rho, fmap.h_phi, k_rho, k_phi):
                z = arr[a, b]
                row += [z.real, z.imag]
            writer.writerow([repr(float(v)) for v in row])
