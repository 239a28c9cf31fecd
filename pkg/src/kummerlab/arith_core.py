"""Exact integer primitives: sieving, primality, von Mangoldt, primitive roots, discrete logs.

Everything here works on Python ints or int64 numpy arrays; values are
confined to the unsigned 64-bit range and callers that build ``n**r + k``
are expected to go through :func:`check_u64` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, RangeError, ResourceError

U64_MAX = 2**64 - 1

DEFAULT_SEGMENT = 2**18
DEFAULT_MEMORY_BUDGET = 2**30  # bytes of prime storage
DLOG_TABLE_THRESHOLD = 2**16

# Deterministic for n < 3.3e24, which covers the whole 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def check_u64(value: int, what: str = "value") -> int:
    if value < 0 or value > U64_MAX:
        raise RangeError(f"{what}={value} is outside the unsigned 64-bit domain")
    return value


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, optionally with least-prime-factor data.

    ``smallest_factor[n]`` is the least prime dividing ``n`` for ``2 <= n <= limit``
    (entries 0 and 1 are 0).
    """

    limit: int
    primes: np.ndarray
    smallest_factor: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)

    def factorize(self, n: int) -> dict[int, int]:
        """Factor ``1 <= n <= limit`` using the least-prime-factor array."""
        if self.smallest_factor is None:
            raise DomainError("table was built without smallest_factor")
        if not 1 <= n <= self.limit:
            raise DomainError(f"{n} outside table range [1, {self.limit}]")
        out: dict[int, int] = {}
        while n > 1:
            p = int(self.smallest_factor[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out


def _simple_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags).astype(np.int64)


def sieve_interval(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Primality flags for every integer in ``[lo, hi]``.

    ``base_primes`` must contain every prime up to ``isqrt(hi)``.
    """
    lo = max(lo, 0)
    if hi < lo:
        return np.zeros(0, dtype=bool)
    size = hi - lo + 1
    flags = np.ones(size, dtype=bool)
    for v in range(lo, min(2, hi + 1)):
        flags[v - lo] = False
    root = math.isqrt(hi)
    ps = base_primes[base_primes <= root]
    small = ps[ps <= size]
    for p in small.tolist():
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start <= hi:
            flags[start - lo :: p] = False
    big = ps[ps > size]
    if len(big):
        # each of these primes has at most one multiple in the window
        first = ((lo + big - 1) // big) * big
        first = np.maximum(first, big * big)
        hit = first <= hi
        flags[(first[hit] - lo)] = False
    return flags


def sieve_primes(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    with_factors: bool = False,
) -> PrimeTable:
    """All primes ``<= limit`` by a segmented sieve of Eratosthenes.

    Working memory is one segment plus the output prime list.  With
    ``with_factors=True`` a full least-prime-factor array is built as well,
    which costs ``8 * limit`` bytes and is charged against ``memory_budget``.
    """
    if limit < 2:
        raise DomainError("limit must be at least 2")
    est = int(1.3 * limit / math.log(limit)) * 8 + segment_size
    if with_factors:
        est += 8 * (limit + 1)
    if est > memory_budget:
        raise ResourceError(
            f"sieve up to {limit} needs ~{est} bytes, budget is {memory_budget}"
        )
    base = _simple_sieve(math.isqrt(limit))
    chunks = []
    lo = 0
    while lo <= limit:
        hi = min(lo + segment_size - 1, limit)
        flags = sieve_interval(lo, hi, base)
        chunks.append(np.flatnonzero(flags).astype(np.int64) + lo)
        lo = hi + 1
    primes = np.concatenate(chunks)
    spf = least_prime_factors(limit) if with_factors else None
    return PrimeTable(limit=limit, primes=primes, smallest_factor=spf)


def least_prime_factors(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p] = p
            if p * p <= limit:
                block = spf[p * p :: p]
                block[block == 0] = p
    return spf


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin over the full 64-bit range."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def iroot(n: int, k: int) -> int:
    """Floor of the real ``k``-th root of ``n >= 0``, exact."""
    if n < 0 or k < 1:
        raise DomainError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = int(round(n ** (1.0 / k)))
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def prime_power_base(m: int) -> int:
    """Return ``p`` if ``m = p**j`` with ``p`` prime and ``j >= 1``, else 0."""
    if m < 2:
        return 0
    if is_prime(m):
        return m
    for j in range(2, m.bit_length() + 1):
        b = iroot(m, j)
        if b < 2:
            break
        if b**j == m and is_prime(b):
            return b
    return 0


def von_mangoldt(m: int) -> float:
    if m < 1:
        raise DomainError("von Mangoldt is defined for m >= 1")
    p = prime_power_base(m)
    return math.log(p) if p else 0.0


def _prime_powers_in(lo: int, hi: int, base_primes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Prime powers ``p**j`` in ``[lo, hi]`` with ``j >= 2``, and their bases."""
    vals, bases = [], []
    j = 2
    while 2**j <= hi:
        cand = base_primes[base_primes <= iroot(hi, j)]
        pj = cand**j
        keep = pj >= lo
        vals.append(pj[keep])
        bases.append(cand[keep])
        j += 1
    if not vals:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate(vals), np.concatenate(bases)


def mangoldt_bases(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """For each ``m`` in ``[lo, hi]`` the prime ``p`` with ``m = p**j``, or 0.

    Lambda(m) is ``log`` of the returned base.  ``base_primes`` must cover
    ``isqrt(hi)``.
    """
    if hi >= 2**62:
        raise RangeError(f"hi={hi} too large for the interval sieve")
    base_primes = np.asarray(base_primes, dtype=np.int64)
    flags = sieve_interval(lo, hi, base_primes)
    out = np.where(flags, np.arange(lo, hi + 1, dtype=np.int64), 0)
    vals, bases = _prime_powers_in(lo, hi, base_primes)
    out[vals - lo] = bases
    return out


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for the moduli used here."""
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def primitive_root(p: int) -> int:
    """Least primitive root of the prime ``p``."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        return 1
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


@dataclass(frozen=True)
class ResidueSystem:
    """A prime ``p`` with primitive root ``g`` and, for small ``p``, a full index table.

    ``log_table[n]`` is the index of ``n`` for ``1 <= n < p``; entry 0 holds -1.
    """

    p: int
    g: int
    log_table: Optional[np.ndarray] = field(default=None, repr=False, compare=False)


def residue_system(p: int, table_threshold: int = DLOG_TABLE_THRESHOLD) -> ResidueSystem:
    g = primitive_root(p)
    table = None
    if p <= table_threshold:
        table = np.full(p, -1, dtype=np.int64)
        x = 1
        for e in range(p - 1):
            table[x] = e
            x = x * g % p
    return ResidueSystem(p=p, g=g, log_table=table)


def bsgs(g: int, h: int, p: int, order: Optional[int] = None) -> int:
    """Baby-step giant-step: least ``e >= 0`` with ``g**e == h (mod p)``."""
    n = order if order is not None else p - 1
    m = math.isqrt(n) + 1
    baby: dict[int, int] = {}
    x = 1
    for j in range(m):
        baby.setdefault(x, j)
        x = x * g % p
    step = pow(g, -m, p)
    y = h % p
    for i in range(m):
        j = baby.get(y)
        if j is not None:
            return i * m + j
        y = y * step % p
    raise DomainError(f"{h} is not a power of {g} modulo {p}")


def discrete_log(rs: ResidueSystem, n: int) -> int:
    n %= rs.p
    if n == 0:
        raise DomainError(f"{rs.p} divides the argument")
    if rs.log_table is not None:
        return int(rs.log_table[n])
    return bsgs(rs.g, n, rs.p)
