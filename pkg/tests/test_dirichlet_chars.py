import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kummerlab.arith_core import mobius, is_squarefree
from kummerlab.dirichlet_chars import (
    PrincipalCharacter,
    UnityValue,
    admissible_moduli,
    enumerate_order_r,
    eval_char,
    gauss_sum,
    make_character,
    pv_max_ratio,
)
from kummerlab.errors import DomainError

import oracles


def test_enumeration_counts():
    assert len(enumerate_order_r(7, 3)) == 2
    assert enumerate_order_r(5, 3) == []
    assert len(enumerate_order_r(91, 3)) == 4
    assert enumerate_order_r(1, 3) == []
    assert len(enumerate_order_r(11 * 31, 5)) == 16


def test_enumeration_order_is_lexicographic():
    labels = [chi.label for chi in enumerate_order_r(91, 3)]
    assert labels == [((7, 1), (13, 1)), ((7, 1), (13, 2)), ((7, 2), (13, 1)), ((7, 2), (13, 2))]


@pytest.mark.parametrize("q,r", [(9, 3), (12, 5), (7, 4), (0, 3)])
def test_bad_moduli(q, r):
    with pytest.raises(DomainError):
        enumerate_order_r(q, r)


def test_eval_examples():
    chi = make_character(3, [(7, 1)])
    assert eval_char(chi, 2).exponent == 2  # 3^2 = 9 = 2 mod 7
    assert eval_char(chi, 14).is_zero
    for c in enumerate_order_r(7, 3):
        assert eval_char(c, 1 + 7 * 5).exponent == 0


def test_unity_arithmetic():
    a, b, z = UnityValue(2, 3), UnityValue(2, 3), UnityValue(None, 3)
    assert (a * b).exponent == 1
    assert (a * z).is_zero
    assert complex(z) == 0
    assert abs(complex(UnityValue(1, 4)) - 1j) < 1e-15


def _moduli(r, qmax):
    return admissible_moduli(qmax, r)


@pytest.mark.parametrize("r", [3, 5, 7])
def test_orthogonality_exact_order_and_periodicity(r):
    for q in _moduli(r, 500):
        for chi in enumerate_order_r(q, r):
            e = chi.exponents(np.arange(1, q + 1))
            live = e[e >= 0]
            # balanced value multiset <=> the character sum vanishes
            counts = np.bincount(live, minlength=r)
            assert len(set(counts.tolist())) == 1
            for j in range(1, r + 1):
                principal = np.all(j * live % r == 0)
                assert principal == (j == r)
            assert np.array_equal(chi.exponents(np.arange(q, 3 * q)), np.tile(chi.table, 2))
            assert np.array_equal(e < 0, np.gcd(np.arange(1, q + 1), q) > 1)


@pytest.mark.parametrize("r", [3, 5, 7])
def test_multiplicativity_exhaustive(r):
    for q in _moduli(r, 500):
        for chi in enumerate_order_r(q, r):
            e = chi.table
            m = np.arange(q)
            prod = np.outer(m, m) % q
            lhs = e[prod]
            both = (e[:, None] >= 0) & (e[None, :] >= 0)
            rhs = np.where(both, (e[:, None] + e[None, :]) % r, -1)
            assert np.array_equal(lhs, rhs)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_multiplicativity_property(m, n):
    chi = make_character(3, [(7, 2), (13, 1)])
    assert chi(m * n) == chi(m) * chi(n)


def test_gauss_sum_examples():
    assert abs(gauss_sum(PrincipalCharacter(1)) - 1) < 1e-9
    for q in (1, 2, 6, 7, 30, 91):
        assert abs(gauss_sum(PrincipalCharacter(q)) - mobius(q)) < 1e-9
    for chi in enumerate_order_r(7, 3):
        assert abs(abs(gauss_sum(chi)) ** 2 - 7) < 1e-9
        direct = oracles.gauss_sum_direct([complex(chi(n)) for n in range(1, 8)], 7)
        assert abs(gauss_sum(chi) - direct) < 1e-9


def test_gauss_sums_to_500():
    for q in range(1, 501):
        if is_squarefree(q):
            assert abs(gauss_sum(PrincipalCharacter(q)) - mobius(q)) < 1e-6
    for r in (3, 5, 7):
        for q in _moduli(r, 500):
            for chi in enumerate_order_r(q, r):
                assert abs(abs(gauss_sum(chi)) ** 2 - q) < 1e-6


def test_pv_examples():
    # quadratic character mod 3: partial sums reach 1, bound sqrt(3) log 3
    assert pv_max_ratio(3) == pytest.approx(1 / (math.sqrt(3) * math.log(3)), abs=1e-12)
    assert pv_max_ratio(7, orders=(3,)) <= 1.2
    assert pv_max_ratio(6, orders=(5,)) == 0.0


def test_pv_window_search_against_brute_force():
    from kummerlab.dirichlet_chars import _max_partial_sum

    for q, r in ((7, 3), (13, 3), (11, 5), (29, 7), (91, 3)):
        for chi in enumerate_order_r(q, r):
            vals = chi.values(np.arange(1, 2 * q + 1))
            best = max(abs(vals[a:b].sum()) for a in range(2 * q) for b in range(a, 2 * q + 1))
            assert _max_partial_sum(vals[:q]) == pytest.approx(best, abs=1e-9)


def test_pv_max_ratio_1000():
    assert pv_max_ratio(1000) <= 1.2
