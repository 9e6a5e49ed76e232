import math
import time

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisect_prime_roots, series_j, series_jp
from patchbpf.specfun import (
    MAX_ORDER,
    BesselDomainError,
    PrimeRootTable,
    bessel_j,
    bessel_j_prime,
    bessel_j_prime2,
    prime_root,
    prime_roots,
)

orders = st.integers(0, MAX_ORDER)
args = st.floats(0.0, 50.0, allow_nan=False)


def test_origin_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert bessel_j_prime(0, 0.0) == 0.0
    assert bessel_j_prime(1, 0.0) == pytest.approx(0.5, abs=1e-15)


def test_first_zero_of_j0():
    assert abs(bessel_j(0, 2.404825557695773)) <= 1e-10


def test_j3_prime_zero():
    assert abs(bessel_j_prime(3, 4.201188941210528)) <= 1e-10


@pytest.mark.parametrize("n", range(0, 7))
def test_against_series_oracle(n):
    xs = np.concatenate([np.linspace(0, 1, 11), np.linspace(1.3, 50, 60)])
    got = bessel_j(n, xs)
    want = np.array([float(series_j(n, x)) for x in xs])
    assert np.max(np.abs(got - want)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(orders, args)
def test_matches_scipy(n, x):
    assert abs(bessel_j(n, x) - sp.jv(n, x)) <= 1e-12
    assert abs(bessel_j_prime(n, x) - sp.jvp(n, x)) <= 1e-12
    assert abs(bessel_j_prime2(n, x) - sp.jvp(n, x, 2)) <= 1e-11


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.floats(1e-3, 50.0))
def test_recurrence(n, x):
    lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x) - 2 * n / x * bessel_j(n, x)
    assert abs(lhs) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), args)
def test_derivative_recurrence(n, x):
    want = 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))
    assert abs(bessel_j_prime(n, x) - want) <= 1e-10


def test_derivative_vs_finite_difference():
    h = 1e-6
    xs = np.linspace(0.1, 49.9, 200)
    for n in range(0, 4):
        fd = (bessel_j(n, xs + h) - bessel_j(n, xs - h)) / (2 * h)
        assert np.max(np.abs(fd - bessel_j_prime(n, xs))) <= 1e-6


def test_vectorised_shape():
    x = np.linspace(0, 10, 12).reshape(3, 4)
    assert bessel_j(2, x).shape == (3, 4)
    assert isinstance(bessel_j(2, 1.5), float)


@pytest.mark.parametrize("bad", [(-1, 1.0), (MAX_ORDER + 1, 1.0), (0, -0.1), (0, math.nan), (1.5, 1.0)])
def test_domain_errors(bad):
    with pytest.raises(BesselDomainError):
        bessel_j(*bad)


@pytest.mark.parametrize(
    "n,i,v",
    [(1, 1, 1.841183781), (2, 1, 3.054236928), (0, 1, 3.831705970), (3, 1, 4.201188941)],
)
def test_prime_root_examples(n, i, v):
    assert prime_root(n, i) == pytest.approx(v, abs=1e-9)


@pytest.fixture(scope="module")
def oracle_roots():
    return {n: bisect_prime_roots(n, 3) for n in range(0, 4)}


@pytest.mark.parametrize("n", range(0, 4))
def test_roots_against_bisection_oracle(n, oracle_roots):
    got = prime_roots(n, 3)
    assert np.max(np.abs(np.array(got) - oracle_roots[n])) <= 1e-9


@pytest.mark.parametrize("n", range(0, 7))
def test_roots_against_scipy(n):
    want = sp.jnp_zeros(n, 5)
    assert np.allclose(prime_roots(n, 5), want, atol=1e-10, rtol=0)


def test_root_ratios_order_modes():
    v11, v21, v01, v31 = (prime_root(1, 1), prime_root(2, 1), prime_root(0, 1), prime_root(3, 1))
    assert v11 < v21 < v01 < v31
    assert v21 / v11 == pytest.approx(1.659, abs=1e-3)
    assert v01 / v11 == pytest.approx(2.081, abs=1e-3)
    assert v31 / v11 == pytest.approx(2.282, abs=1e-3)


@pytest.mark.parametrize("n", range(0, 4))
def test_root_table_invariants(n):
    table = PrimeRootTable(max_order=3, max_index=6)
    vals = [table[n, i] for i in range(1, 7)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert max(abs(bessel_j_prime(n, v)) for v in vals) <= 1e-10


@pytest.mark.parametrize("n", range(1, 4))
def test_roots_interlace_with_bessel_zeros(n):
    jp = prime_roots(n, 6)
    j = sp.jn_zeros(n, 6)
    # j'_{n,1} < j_{n,1} < j'_{n,2} < j_{n,2} < ...
    for k in range(5):
        assert jp[k] < j[k] < jp[k + 1]


def test_root_index_validation():
    with pytest.raises(ValueError):
        prime_root(1, 0)


def test_table_is_read_only_mapping():
    table = PrimeRootTable(2, 2)
    assert len(table) == 6
    assert (0, 1) in table and (3, 1) not in table
    with pytest.raises(TypeError):
        table[1, 1] = 0.0


def test_series_oracle_for_derivative_agrees():
    assert float(series_jp(1, 0.0)) == 0.5


def test_root_suite_runtime():
    prime_roots.cache_clear()
    t0 = time.perf_counter()
    for n in range(4):
        prime_roots(n, 2)
    assert time.perf_counter() - t0 < 1.0
