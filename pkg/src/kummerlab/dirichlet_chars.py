"""Dirichlet characters of exact prime order r on squarefree split moduli.

A character is stored as exponent data in Z/r: one (residue system, w_p)
pair per prime p | q, with chi(n) = exp(2 pi i * sum_p w_p * ind_p(n) / r).
Complex numbers only appear when sums are formed.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .arith_core import ResidueSystem, factorize, is_prime, residue_system
from .errors import DomainError


@dataclass(frozen=True)
class UnityValue:
    """An r-th root of unity exp(2 pi i e / r), or zero when ``exponent`` is None."""

    exponent: Optional[int]
    r: int

    def __post_init__(self):
        if self.exponent is not None:
            object.__setattr__(self, "exponent", self.exponent % self.r)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: "UnityValue") -> "UnityValue":
        if self.r != other.r:
            raise DomainError("cannot multiply roots of unity of different order")
        if self.is_zero or other.is_zero:
            return UnityValue(None, self.r)
        return UnityValue(self.exponent + other.exponent, self.r)

    def __complex__(self) -> complex:
        if self.is_zero:
            return 0j
        return cmath.exp(2j * math.pi * self.exponent / self.r)


@lru_cache(maxsize=4096)
def _residue_system(p: int) -> ResidueSystem:
    # character tables are length q anyway, so always keep the full index table
    return residue_system(p, table_threshold=p)


def unity_powers(r: int) -> np.ndarray:
    """``exp(2 pi i j / r)`` for ``j = 0..r-1`` with an extra trailing 0 for the zero marker."""
    vals = np.exp(2j * np.pi * np.arange(r) / r)
    return np.append(vals, 0j)


@dataclass(frozen=True)
class OrderRCharacter:
    """Exact-order-r character mod squarefree ``q``, one nonzero exponent per prime."""

    r: int
    q: int
    components: tuple[tuple[ResidueSystem, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(rs.p for rs, _ in self.components)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for _, w in self.components)

    @property
    def label(self) -> tuple[tuple[int, int], ...]:
        return tuple((rs.p, w) for rs, w in self.components)

    @cached_property
    def table(self) -> np.ndarray:
        """Exponent of chi(n) for n in [0, q); -1 where gcd(n, q) > 1."""
        n = np.arange(self.q)
        total = np.zeros(self.q, dtype=np.int64)
        zero = np.zeros(self.q, dtype=bool)
        for rs, w in self.components:
            ind = rs.log_table[n % rs.p]
            zero |= ind < 0
            total += w * ind
        out = total % self.r
        out[zero] = -1
        out.setflags(write=False)
        return out

    def exponents(self, n) -> np.ndarray:
        """Vectorised exponents at integers ``n`` (any sign); -1 marks zero."""
        return self.table[np.mod(np.asarray(n, dtype=np.int64), self.q)]

    def values(self, n) -> np.ndarray:
        """Complex values at ``n``."""
        e = self.exponents(n)
        return unity_powers(self.r)[np.where(e < 0, self.r, e)]

    def __call__(self, n: int) -> UnityValue:
        return eval_char(self, n)

    def __hash__(self):
        return hash((self.r, self.q, self.label))

    def __eq__(self, other):
        if not isinstance(other, OrderRCharacter):
            return NotImplemented
        return (self.r, self.q, self.label) == (other.r, other.q, other.label)


@dataclass(frozen=True)
class PrincipalCharacter:
    """The principal character mod ``q``."""

    q: int

    @cached_property
    def table(self) -> np.ndarray:
        n = np.arange(self.q)
        return np.where(np.gcd(n, self.q) == 1, 0, -1)

    def exponents(self, n) -> np.ndarray:
        return self.table[np.mod(np.asarray(n, dtype=np.int64), self.q)]

    def values(self, n) -> np.ndarray:
        return np.where(self.exponents(n) < 0, 0.0, 1.0).astype(complex)


def _check_modulus(q: int, r: int) -> list[int]:
    if q < 1:
        raise DomainError("modulus must be positive")
    if not is_prime(r):
        raise DomainError(f"order r={r} must be prime")
    f = factorize(q) if q > 1 else {}
    if any(e > 1 for e in f.values()):
        raise DomainError(f"modulus {q} is not squarefree")
    if q % r == 0:
        raise DomainError(f"modulus {q} is divisible by r={r}")
    return sorted(f)


def enumerate_order_r(q: int, r: int) -> list[OrderRCharacter]:
    """All primitive characters mod ``q`` of exact order ``r``.

    Ordering is lexicographic in ``(p, w_p)`` with primes ascending and each
    ``w_p`` in ``1..r-1`` taken relative to the least primitive root of ``p``.
    Returns ``[]`` when some ``p | q`` has ``p != 1 (mod r)``, and for ``q = 1``.
    """
    primes = _check_modulus(q, r)
    if not primes or any(p % r != 1 for p in primes):
        return []
    systems = [_residue_system(p) for p in primes]
    out = []
    for ws in itertools.product(range(1, r), repeat=len(primes)):
        comps = tuple(zip(systems, ws))
        out.append(OrderRCharacter(r=r, q=q, components=comps))
    return out


def make_character(r: int, label: Sequence[tuple[int, int]]) -> OrderRCharacter:
    """Build the character with the given ``(p, w_p)`` pairs."""
    comps = tuple(sorted(((_residue_system(p), w % r) for p, w in label), key=lambda c: c[0].p))
    if any(w == 0 for _, w in comps):
        raise DomainError("every exponent must be nonzero mod r")
    q = math.prod(rs.p for rs, _ in comps)
    _check_modulus(q, r)
    return OrderRCharacter(r=r, q=q, components=comps)


def eval_char(chi: OrderRCharacter, n: int) -> UnityValue:
    e = int(chi.table[n % chi.q])
    return UnityValue(None if e < 0 else e, chi.r)


Character = Union[OrderRCharacter, PrincipalCharacter]


def gauss_sum(chi: Character) -> complex:
    """tau(chi) = sum_{n=1}^{q} chi(n) e(n/q) in double precision."""
    q = chi.q
    n = np.arange(1, q + 1)
    return complex(np.sum(chi.values(n) * np.exp(2j * np.pi * n / q)))


def admissible_moduli(q_max: int, r: int, q_min: int = 1) -> list[int]:
    """Squarefree ``q`` in ``[q_min, q_max]``, ``q > 1``, all of whose primes are 1 mod r."""
    out = []
    for q in range(max(q_min, 2), q_max + 1):
        f = factorize(q)
        if all(e == 1 and p % r == 1 for p, e in f.items()):
            out.append(q)
    return out


def _max_partial_sum(vals: np.ndarray) -> float:
    """Largest |sum over a window| for a q-periodic sequence with zero period sum.

    Window sums are differences of prefix sums; periodicity reduces windows
    inside [1, 2q] to pairs of prefix sums within one period, so the answer is
    the diameter of the prefix-sum point set.
    """
    s = np.concatenate([[0j], np.cumsum(vals)])
    if np.all(np.abs(s.imag) < 1e-12):
        return float(s.real.max() - s.real.min())
    pts = np.column_stack([s.real, s.imag])
    try:
        pts = pts[ConvexHull(pts).vertices]
    except QhullError:  # collinear prefix sums
        pass
    z = pts[:, 0] + 1j * pts[:, 1]
    return float(np.abs(z[:, None] - z[None, :]).max())


def pv_max_ratio(q_max: int, orders: Iterable[int] = (2, 3, 5, 7)) -> float:
    """max |sum_{M<n<=M+N} chi(n)| / (sqrt(q) log q) over primitive exact-order-r chi.

    Ranges over ``q <= q_max`` and every window inside ``[1, 2q]``.
    """
    best = 0.0
    for r in orders:
        for q in admissible_moduli(q_max, r, q_min=3):
            bound = math.sqrt(q) * math.log(q)
            for chi in enumerate_order_r(q, r):
                vals = chi.values(np.arange(1, q + 1))
                best = max(best, _max_partial_sum(vals) / bound)
    return best
