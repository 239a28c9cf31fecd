"""Root counts of u^r + k mod p, the complete sums Sigma(q), the truncated
singular series of n^r + k, and finite truncations of its tail Psi(k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .arith_core import euler_phi, factorize, is_prime, mobius, sieve_primes
from .dirichlet_chars import admissible_moduli, enumerate_order_r, unity_powers
from .errors import DomainError, IdentityViolation


@dataclass(frozen=True)
class SingularSeriesParams:
    r: int
    n0: int = 0
    M0: int = 1
    P: int = 10_000

    def __post_init__(self):
        if not is_prime(self.r):
            raise DomainError(f"r={self.r} must be prime")
        if self.M0 < 1:
            raise DomainError("M0 must be a positive integer")
        if self.P < 3:
            raise DomainError("truncation bound P must be at least 3")


@dataclass(frozen=True)
class RootCount:
    k: int
    p: int
    r: int
    count: int


@lru_cache(maxsize=None)
def power_histogram(p: int, r: int) -> np.ndarray:
    """``h[v] = #{u mod p : u**r == v (mod p)}``."""
    u = np.arange(p, dtype=np.int64)
    x = u.copy()
    for _ in range(r - 1):
        x = x * u % p
    h = np.bincount(x, minlength=p)
    h.setflags(write=False)
    return h


def count_roots(k: int, p: int, r: int) -> RootCount:
    """Exhaustive count of u in [0, p) with u^r + k = 0 (mod p)."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    target = -k % p
    count = sum(1 for u in range(p) if pow(u, r, p) == target)
    return RootCount(k=k, p=p, r=r, count=count)


def root_counts(ks, p: int, r: int) -> np.ndarray:
    """Vectorised ``n_{k,p}`` for an array of ``k``."""
    return power_histogram(p, r)[np.mod(-np.asarray(ks, dtype=np.int64), p)]


def count_roots_via_characters(k: int, p: int, r: int) -> int:
    """``1 + sum chi(-k)`` over the exact-order-r characters mod ``p``.

    Exponents are tallied exactly and only the final tally is turned into a
    complex number, which must round to an integer.
    """
    if p % r != 1:
        raise DomainError(f"p={p} is not 1 mod r={r}")
    tally = np.zeros(r + 1, dtype=np.int64)
    for chi in enumerate_order_r(p, r):
        e = int(chi.exponents(-k))
        tally[r if e < 0 else e] += 1
    z = 1 + complex(np.dot(tally, unity_powers(r)))
    n = round(z.real)
    if abs(z.imag) > 1e-6 or abs(z.real - n) > 1e-6:
        raise IdentityViolation(f"character sum {z} is not an integer (k={k}, p={p}, r={r})")
    return n


def sigma_q(q: int, k: int, n0: int, M0: int, r: int) -> int:
    """Sigma(q) for squarefree q, exactly.

    Sigma is multiplicative in q.  At a prime p the inner Ramanujan sum is
    p-1 when p divides the polynomial value and -1 otherwise, so
    Sigma(p) = (p-1)z - (p'-z) where c runs over p' = p/(p, M0) residues and
    z of them are roots.
    """
    f = factorize(q) if q > 1 else {}
    if any(e > 1 for e in f.values()):
        raise DomainError(f"q={q} is not squarefree")
    out = 1
    for p in f:
        span = p // math.gcd(p, M0)
        z = sum(1 for c in range(span) if (pow(n0 + c * M0, r, p) + k) % p == 0)
        out *= (p - 1) * z - (span - z)
    return out


@lru_cache(maxsize=8)
def _split_primes(P: int, r: int) -> tuple[int, ...]:
    primes = sieve_primes(max(P, 3)).primes
    return tuple(int(p) for p in primes if p % r == 1)


def singular_series_batch(ks, params: SingularSeriesParams) -> np.ndarray:
    """Truncated singular series for each ``k``.

    Euler factors ``1 - (n_{k,p}-1)/(p-1)`` are multiplied in increasing ``p``
    over ``p <= P``, ``p`` not dividing ``2*M0``; factors at ``p != 1 (mod r)``
    equal 1 and are skipped.  Entries with ``gcd(M0, n0^r + k) > 1`` are 0.
    """
    ks = np.asarray(ks, dtype=np.int64)
    r, M0 = params.r, params.M0
    out = np.ones(ks.shape, dtype=np.float64)
    for p in _split_primes(params.P, r):
        if (2 * M0) % p == 0:
            continue
        n = root_counts(ks, p, r)
        out *= 1.0 - (n - 1) / (p - 1)
    base = pow(params.n0, r, M0) if M0 > 1 else 0
    if M0 > 1:
        vals = np.mod(base + np.mod(ks, M0), M0)
        alive = np.gcd(vals, M0) == 1
        out = np.where(alive, out, 0.0)
    return out / euler_phi(M0)


def singular_series(k: int, params: SingularSeriesParams) -> float:
    return float(singular_series_batch([k], params)[0])


def truncation_gap(ks, params: SingularSeriesParams) -> tuple[np.ndarray, np.ndarray]:
    """Series at ``P`` and the absolute change on doubling ``P``."""
    s1 = singular_series_batch(ks, params)
    doubled = SingularSeriesParams(params.r, params.n0, params.M0, 2 * params.P)
    s2 = singular_series_batch(ks, doubled)
    return s1, np.abs(s1 - s2)


def scan_rows(ks: Iterable[int], params: SingularSeriesParams) -> list[tuple[int, float, int, float]]:
    """Rows ``(k, S_trunc, P, stability_metric)`` for the CSV emitter."""
    ks = list(ks)
    s, gap = truncation_gap(ks, params)
    return [(k, float(a), params.P, float(b)) for k, a, b in zip(ks, s, gap)]


def _psi_terms(r: int, Q1: int, Qmax: int) -> list[tuple[float, tuple[int, ...]]]:
    terms = []
    for q in admissible_moduli(Qmax, r, q_min=Q1 + 1):
        terms.append((mobius(q) / euler_phi(q), tuple(factorize(q))))
    return terms


def psi_tail_batch(ks, r: int, Q1: int, Qmax: int) -> np.ndarray:
    """Truncated tail ``sum_{Q1 < q <= Qmax} mu(q)/phi(q) prod_{p|q} (n_{k,p} - 1)``.

    Only squarefree q built from primes 1 mod r contribute; other q carry a
    factor n_{k,p} - 1 = 0.
    """
    if Q1 >= Qmax:
        raise DomainError("need Q1 < Qmax")
    ks = np.asarray(ks, dtype=np.int64)
    cache: dict[int, np.ndarray] = {}
    out = np.zeros(ks.shape, dtype=np.float64)
    for coef, primes in _psi_terms(r, Q1, Qmax):
        prod = np.full(ks.shape, coef)
        for p in primes:
            if p not in cache:
                cache[p] = root_counts(ks, p, r) - 1
            prod = prod * cache[p]
        out += prod
    return out


def psi_tail(k: int, r: int, Q1: int, Qmax: int) -> float:
    return float(psi_tail_batch([k], r, Q1, Qmax)[0])


def psi_mean_square(y: int, r: int, Q1: int, Qmax: int) -> float:
    """``(1/y) sum_{k <= y} |Psi_trunc(k)|^2``."""
    vals = psi_tail_batch(np.arange(1, y + 1), r, Q1, Qmax)
    return math.fsum((vals * vals).tolist()) / y


def euler_factor_bounds(p: int, r: int) -> tuple[float, float]:
    """Range ``[1 - (r-1)/(p-1), 1 + 1/(p-1)]`` containing every Euler factor at p."""
    return 1 - (r - 1) / (p - 1), 1 + 1 / (p - 1)
