import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kummerlab.arith_core import (
    U64_MAX,
    bsgs,
    check_u64,
    discrete_log,
    euler_phi,
    factorize,
    iroot,
    is_prime,
    least_prime_factors,
    mangoldt_bases,
    mobius,
    prime_power_base,
    primitive_root,
    residue_system,
    sieve_interval,
    sieve_primes,
    von_mangoldt,
)
from kummerlab.errors import DomainError, RangeError, ResourceError

import oracles


def test_sieve_small_examples():
    assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]
    assert len(sieve_primes(100).primes) == 25
    with pytest.raises(DomainError):
        sieve_primes(1)


def test_sieve_matches_trial_division_to_1e6():
    got = sieve_primes(10**6).primes
    assert len(got) == 78498
    assert np.array_equal(got, oracles.primes_upto_trial(10**6))


@pytest.mark.parametrize("seg", [7, 64, 1000, 2**18])
def test_segment_size_does_not_change_result(seg):
    assert np.array_equal(sieve_primes(20_000, segment_size=seg).primes, sieve_primes(20_000).primes)


def test_sieve_memory_budget():
    with pytest.raises(ResourceError):
        sieve_primes(10**7, memory_budget=1000)


def test_sieve_interval_far_out():
    lo = 10**12
    base = sieve_primes(10**6 + 1).primes
    flags = sieve_interval(lo, lo + 500, base)
    assert [lo + i for i in np.flatnonzero(flags)] == [n for n in range(lo, lo + 501) if is_prime(n)]


def test_is_prime_examples():
    assert not is_prime(1)
    assert is_prime(10**9 + 7)
    assert not is_prime(3215031751)  # strong pseudoprime to 2, 3, 5, 7
    assert 3215031751 % 151 == 0
    assert is_prime(2**61 - 1)
    assert not is_prime(2**64 - 1)


def test_is_prime_agrees_with_trial_division_to_1e6():
    flags = np.zeros(10**6 + 1, dtype=bool)
    flags[oracles.primes_upto_trial(10**6)] = True
    got = np.fromiter((is_prime(n) for n in range(10**6 + 1)), dtype=bool, count=10**6 + 1)
    assert np.array_equal(got, flags)


def test_u64_domain_check():
    assert check_u64(U64_MAX) == U64_MAX
    with pytest.raises(RangeError):
        check_u64(U64_MAX + 1)
    with pytest.raises(RangeError):
        check_u64(-1)


@given(st.integers(0, 2**64 - 1), st.integers(2, 7))
def test_iroot_is_exact(n, k):
    x = iroot(n, k)
    assert x**k <= n < (x + 1) ** k


def test_von_mangoldt_examples():
    assert von_mangoldt(1) == 0.0
    assert von_mangoldt(8) == pytest.approx(math.log(2))
    assert von_mangoldt(12) == 0.0
    assert von_mangoldt(3**40) == pytest.approx(math.log(3))
    with pytest.raises(DomainError):
        von_mangoldt(0)


def test_von_mangoldt_support_to_1e5():
    lpf = oracles.lpf_table(10**5)
    for m in range(1, 10**5 + 1):
        assert (von_mangoldt(m) != 0) == (oracles.mangoldt_by_lpf(m, lpf) != 0)


def test_near_powers_are_not_prime_powers():
    # float roots of p^j +- 2 round to p for large p; the exact check must not
    for p in (1_000_003, 4_294_967_291):
        for j in (2, 3):
            v = p**j
            if v <= U64_MAX:
                assert prime_power_base(v) == p
                for w in (v - 2, v + 2):
                    assert prime_power_base(w) in (0, w)
                    assert prime_power_base(w) == (w if is_prime(w) else 0)


def test_chebyshev_psi_1e6():
    N = 10**6
    base = sieve_primes(1001).primes
    bases = mangoldt_bases(1, N, base)
    psi = math.fsum(np.log(bases[bases > 0].astype(float)).tolist())
    assert abs(psi - N) <= 0.07 * N


def test_mangoldt_bases_matches_pointwise():
    lo, hi = 10**9, 10**9 + 3000
    base = sieve_primes(math.isqrt(hi) + 1).primes
    got = mangoldt_bases(lo, hi, base)
    assert got.tolist() == [prime_power_base(n) for n in range(lo, hi + 1)]
    assert mangoldt_bases(1, 20, base).tolist() == [0, 2, 3, 2, 5, 0, 7, 2, 3, 0, 11, 0, 13, 0, 0, 2, 17, 0, 19, 0]


def test_least_prime_factors():
    lpf = least_prime_factors(1000)
    ref = oracles.lpf_table(1000)
    assert lpf[2:].tolist() == ref[2:]


def test_factor_helpers():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}
    assert mobius(1) == 1 and mobius(30) == -1 and mobius(12) == 0 and mobius(91) == 1
    assert euler_phi(91) == 72 and euler_phi(1) == 1


@pytest.mark.parametrize("p,g", [(7, 3), (3, 2), (23, 5), (2, 1)])
def test_primitive_root_examples(p, g):
    assert primitive_root(p) == g


def test_primitive_root_is_least_generator():
    for p in sieve_primes(2000).primes.tolist()[1:]:
        g = primitive_root(p)
        assert oracles.element_order(g, p) == p - 1
        assert all(oracles.element_order(h, p) < p - 1 for h in range(2, g))


def test_discrete_log_examples():
    rs = residue_system(7)
    assert rs.g == 3
    assert discrete_log(rs, 3) == 1
    assert discrete_log(rs, 1) == 0
    assert discrete_log(rs, 6) == 3


def test_discrete_log_round_trip_to_1000():
    for p in sieve_primes(1000).primes.tolist():
        rs = residue_system(p)
        for n in range(1, p):
            assert pow(rs.g, discrete_log(rs, n), p) == n


def test_bsgs_path_matches_table():
    p = 1_000_003
    big = residue_system(p, table_threshold=10)
    assert big.log_table is None
    for n in (1, 2, 12345, p - 1):
        e = discrete_log(big, n)
        assert pow(big.g, e, p) == n and 0 <= e < p - 1
    assert bsgs(3, 6, 7) == 3


def test_discrete_log_of_multiple_of_p():
    with pytest.raises(DomainError):
        discrete_log(residue_system(7), 14)


@settings(max_examples=50)
@given(st.integers(2, 10**5))
def test_factorize_round_trip(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)
