"""Bessel functions of the first kind and the zeros of their derivatives.

Only integer orders and real, non-negative arguments are handled.  Small
arguments use the ascending power series; everything else goes through
Miller's backward recurrence normalised with the Neumann sum
``J_0 + 2 * sum(J_2k) = 1``.  Both paths are vectorised over ``x``.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from functools import lru_cache

import numpy as np

__all__ = [
    "MAX_ORDER",
    "MAX_ARGUMENT",
    "BesselDomainError",
    "RootSearchError",
    "PrimeRootTable",
    "bessel_j",
    "bessel_j_prime",
    "bessel_j_prime2",
    "prime_root",
    "prime_roots",
]

MAX_ORDER = 6
MAX_ARGUMENT = 100.0

_SERIES_CUTOFF = 1.0
_SERIES_TERMS = 24
_RESCALE_AT = 1e200
_ROOT_SCAN_STEP = 0.05
_ROOT_TOL = 1e-12


class BesselDomainError(ValueError):
    """Order or argument outside the supported range."""


class RootSearchError(RuntimeError):
    """A derivative root could not be bracketed inside the search bound."""


def _check_order(n) -> int:
    if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
        raise BesselDomainError(f"order must be an integer, got {n!r}")
    n = int(n)
    if n < 0 or n > MAX_ORDER:
        raise BesselDomainError(f"order {n} outside supported range 0..{MAX_ORDER}")
    return n


def _check_argument(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)):
        raise BesselDomainError("argument must be finite")
    if np.any(arr < 0.0):
        raise BesselDomainError("argument must be non-negative")
    if np.any(arr > MAX_ARGUMENT):
        raise BesselDomainError(f"argument exceeds supported bound {MAX_ARGUMENT}")
    return arr


def _series_table(nmax: int, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    mhsq = -half * half
    out = np.empty((nmax + 1, x.size))
    lead = np.ones_like(x)
    for n in range(nmax + 1):
        if n:
            lead = lead * half / n
        term = lead.copy()
        total = lead.copy()
        for k in range(1, _SERIES_TERMS):
            term = term * mhsq / (k * (k + n))
            total += term
        out[n] = total
    return out


def _miller_table(nmax: int, x: np.ndarray) -> np.ndarray:
    top = max(float(nmax), float(x.max()))
    start = int(top) + 30 + int(6.0 * math.sqrt(top))
    start += start % 2

    out = np.zeros((nmax + 1, x.size))
    j_next = np.zeros_like(x)
    j_curr = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    two_over_x = 2.0 / x
    # j_curr holds the unnormalised J_k, descending from k = start
    for k in range(start, 0, -1):
        j_prev = k * two_over_x * j_curr - j_next
        j_next, j_curr = j_curr, j_prev
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_curr
        if k - 1 <= nmax:
            out[k - 1] = j_curr
        big = np.abs(j_curr) > _RESCALE_AT
        if np.any(big):
            s = np.where(big, 1.0 / _RESCALE_AT, 1.0)
            j_curr *= s
            j_next *= s
            norm *= s
            out *= s
    norm += j_curr  # k = 0 term enters once
    return out / norm


def _table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Rows J_0..J_nmax evaluated at the flattened ``x``."""
    flat = x.ravel()
    out = np.empty((nmax + 1, flat.size))
    zero = flat == 0.0
    small = (flat < _SERIES_CUTOFF) & ~zero
    large = flat >= _SERIES_CUTOFF
    if np.any(zero):
        out[:, zero] = 0.0
        out[0, zero] = 1.0
    if np.any(small):
        out[:, small] = _series_table(nmax, flat[small])
    if np.any(large):
        out[:, large] = _miller_table(nmax, flat[large])
    return out


def _signed(table: np.ndarray, k: int) -> np.ndarray:
    # J_{-k} = (-1)^k J_k
    return table[k] if k >= 0 else (-1) ** (-k) * table[-k]


def _finish(values: np.ndarray, like: np.ndarray):
    values = values.reshape(like.shape)
    return float(values) if values.ndim == 0 else values


def bessel_j(n: int, x):
    """Return J_n(x).  Accepts a scalar or an array for ``x``."""
    n = _check_order(n)
    arr = _check_argument(x)
    return _finish(_table(n, arr)[n], arr)


def bessel_j_prime(n: int, x):
    """Return J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2."""
    n = _check_order(n)
    arr = _check_argument(x)
    t = _table(n + 1, arr)
    return _finish(0.5 * (_signed(t, n - 1) - t[n + 1]), arr)


def bessel_j_prime2(n: int, x):
    """Return J_n''(x) = (J_{n-2} - 2 J_n + J_{n+2}) / 4."""
    n = _check_order(n)
    arr = _check_argument(x)
    t = _table(n + 2, arr)
    return _finish(0.25 * (_signed(t, n - 2) - 2.0 * t[n] + t[n + 2]), arr)


def _refine(n: int, lo: float, hi: float) -> float:
    f_lo = bessel_j_prime(n, lo)
    # bisect down to a narrow bracket, then polish with Newton
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        f_mid = bessel_j_prime(n, mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(50):
        step = bessel_j_prime(n, x) / bessel_j_prime2(n, x)
        x_new = x - step
        if not lo <= x_new <= hi:
            break
        x = x_new
        if abs(step) <= _ROOT_TOL * max(1.0, abs(x)):
            break
    return x


@lru_cache(maxsize=None)
def prime_roots(n: int, count: int) -> tuple[float, ...]:
    """First ``count`` positive zeros of J_n', ascending.

    x = 0 is never reported, so for n = 0 the first entry is 3.8317...
    """
    n = _check_order(n)
    if count < 1:
        raise ValueError("count must be >= 1")
    grid = np.arange(1, int(MAX_ARGUMENT / _ROOT_SCAN_STEP) + 1) * _ROOT_SCAN_STEP
    vals = bessel_j_prime(n, grid)
    sign_change = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
    if sign_change.size < count:
        raise RootSearchError(
            f"only {sign_change.size} roots of J_{n}' bracketed below x = {MAX_ARGUMENT}; "
            f"{count} requested"
        )
    roots = []
    for idx in sign_change[:count]:
        root = _refine(n, float(grid[idx]), float(grid[idx + 1]))
        if abs(bessel_j_prime(n, root)) > 1e-10:
            raise RootSearchError(f"root refinement of J_{n}' near {root} did not converge")
        roots.append(root)
    return tuple(roots)


def prime_root(n: int, index: int) -> float:
    """The ``index``-th (1-based) positive root v_ni of J_n'."""
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)) or index < 1:
        raise ValueError(f"root index must be a positive integer, got {index!r}")
    return prime_roots(n, int(index))[-1]


class PrimeRootTable(Mapping):
    """Read-only table of v_ni keyed by ``(n, i)``."""

    def __init__(self, max_order: int = 3, max_index: int = 4):
        max_order = _check_order(max_order)
        entries = {}
        for n in range(max_order + 1):
            for i, v in enumerate(prime_roots(n, max_index), start=1):
                entries[(n, i)] = v
        self._entries = entries
        self.max_order = max_order
        self.max_index = max_index

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"PrimeRootTable(max_order={self.max_order}, max_index={self.max_index})"
