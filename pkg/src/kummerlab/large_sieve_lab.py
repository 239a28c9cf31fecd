"""Numerical checks of the large sieve for exact-order-r characters.

The bilinear form is

    sum_{Q < q <= 2Q} sum_{chi mod q, chi^r = chi_0 != chi} |sum_{M < m <= 2M} a_m chi(m)|^2

with a_m supported on squarefree m coprime to r.  For prime r a character
with chi^r principal and chi non-principal has exact order r; the family used
here is every such character induced from a primitive one whose conductor is
a squarefree product of primes = 1 (mod r).
"""

from __future__ import annotations

import math
from itertools import combinations
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .arith_core import factorize, is_squarefree
from .dirichlet_chars import OrderRCharacter, enumerate_order_r
from .errors import ConvergenceError, DomainError

TERM_LABELS = ("Q^2+M", "Q^3/2+Q^1/2M", "Q^2/3M+Q^4/3", "Q+M^5/3Q^-1/3+Q^1/3M^4/3")


def delta_bound(Q: float, M: float, eps: float = 0.0) -> tuple[float, str]:
    """(QM)^eps times the least of the four regime terms, with the winning label.

    Ties go to the earlier term.
    """
    if Q < 1 or M < 1 or eps < 0:
        raise DomainError("need Q, M >= 1 and eps >= 0")
    terms = (
        Q**2 + M,
        Q**1.5 + Q**0.5 * M,
        Q ** (2 / 3) * M + Q ** (4 / 3),
        Q + M ** (5 / 3) * Q ** (-1 / 3) + Q ** (1 / 3) * M ** (4 / 3),
    )
    i = min(range(4), key=lambda j: (terms[j], j))
    return (Q * M) ** eps * terms[i], TERM_LABELS[i]


@dataclass(frozen=True)
class Family:
    """Characters of one (r, Q) cell, each tagged with the modulus it is taken mod."""

    r: int
    Q: float
    moduli: tuple[int, ...]
    chars: tuple[OrderRCharacter, ...]

    def __len__(self) -> int:
        return len(self.chars)


def _split_part(q: int, r: int) -> list[int]:
    return [p for p in factorize(q) if p % r == 1] if q > 1 else []


@lru_cache(maxsize=256)
def character_family(r: int, Q: float, primitive_only: bool = False) -> Family:
    """Exact-order-r characters mod q for every integer q in (Q, 2Q].

    By default a modulus q carries every character induced from a primitive
    one of conductor d | q, d > 1 squarefree with all primes 1 mod r.  With
    ``primitive_only`` only q that are themselves such a d contribute, with
    their primitive characters.
    """
    moduli, chars = [], []
    for q in range(math.floor(Q) + 1, math.floor(2 * Q) + 1):
        if primitive_only:
            if q % r and is_squarefree(q):
                for chi in enumerate_order_r(q, r):
                    moduli.append(q)
                    chars.append(chi)
            continue
        split = _split_part(q, r)
        for size in range(1, len(split) + 1):
            for d in _products(split, size):
                for chi in enumerate_order_r(d, r):
                    moduli.append(q)
                    chars.append(chi)
    return Family(r, Q, tuple(moduli), tuple(chars))


def _products(primes: Sequence[int], size: int) -> list[int]:
    return [math.prod(c) for c in combinations(primes, size)]


def support(M: float, r: int) -> np.ndarray:
    """Squarefree m in (M, 2M] with gcd(m, r) = 1."""
    ms = [m for m in range(math.floor(M) + 1, math.floor(2 * M) + 1) if m % r and is_squarefree(m)]
    return np.asarray(ms, dtype=np.int64)


def character_matrix(family: Family, ms: np.ndarray) -> np.ndarray:
    """t[i, j] = chi_i(m_j), zero where gcd(m_j, q_i) > 1."""
    t = np.zeros((len(family), len(ms)), dtype=complex)
    for i, (q, chi) in enumerate(zip(family.moduli, family.chars)):
        row = chi.values(ms)
        if q != chi.q:
            row = np.where(np.gcd(ms, q) == 1, row, 0)
        t[i] = row
    return t


@dataclass
class LargeSieveInstance:
    r: int
    Q: float
    M: float
    coeffs: np.ndarray  # indexed by support(M, r)
    seed: Optional[int] = None
    primitive_only: bool = False
    ms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.ms = support(self.M, self.r)
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != self.ms.shape:
            raise DomainError(
                f"expected {len(self.ms)} coefficients (squarefree m in (M, 2M] coprime to r)"
            )

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


@dataclass(frozen=True)
class SieveReport:
    r: int
    Q: float
    M: float
    lhs: float
    norm_sq: float
    delta: float
    ratio: float
    active_term: str
    n_chars: int
    seed: Optional[int] = None


def ls_lhs(inst: LargeSieveInstance) -> float:
    fam = character_family(inst.r, inst.Q, inst.primitive_only)
    if not len(fam) or not len(inst.ms):
        return 0.0
    t = character_matrix(fam, inst.ms)
    return float(np.sum(np.abs(t @ inst.coeffs) ** 2))


def report(inst: LargeSieveInstance, eps: float = 0.0) -> SieveReport:
    lhs = ls_lhs(inst)
    delta, term = delta_bound(inst.Q, inst.M, eps)
    nsq = inst.norm_sq
    fam = character_family(inst.r, inst.Q, inst.primitive_only)
    return SieveReport(
        inst.r, inst.Q, inst.M, lhs, nsq, delta, lhs / (delta * nsq) if nsq else 0.0, term, len(fam), inst.seed
    )


def coefficient_batch(
    fam: Family, ms: np.ndarray, trials: int, rng: np.random.Generator
) -> np.ndarray:
    """Columns: Rademacher and unit-phase vectors, the all-ones vector, and the
    aligned adversary conj(chi(m)) for every character chi of the family.

    Taking every chi rather than one sampled chi makes the adversarial part
    of the maximum independent of the seed.
    """
    n = len(ms)
    half = trials // 2
    cols = [rng.choice([-1.0, 1.0], size=(n, half)).astype(complex)]
    cols.append(np.exp(2j * np.pi * rng.random((n, trials - half))))
    cols.append(np.ones((n, 1), dtype=complex))
    if len(fam):
        cols.append(np.conj(character_matrix(fam, ms)).T)
    return np.concatenate(cols, axis=1)


def ratio_cell(
    r: int, Q: float, M: float, trials: int, seed: int, primitive_only: bool = False, eps: float = 0.0
) -> SieveReport:
    """Worst ratio lhs / (Delta * ||a||^2) over random and adversarial vectors."""
    fam = character_family(r, Q, primitive_only)
    ms = support(M, r)
    delta, term = delta_bound(Q, M, eps)
    if not len(fam) or not len(ms):
        return SieveReport(r, Q, M, 0.0, 0.0, delta, 0.0, term, len(fam), seed)
    rng = np.random.default_rng([seed, r, int(Q * 1000), int(M * 1000)])
    a = coefficient_batch(fam, ms, trials, rng)
    t = character_matrix(fam, ms)
    lhs = np.sum(np.abs(t @ a) ** 2, axis=0)
    nsq = np.sum(np.abs(a) ** 2, axis=0)
    ratios = np.where(nsq > 0, lhs / (delta * np.where(nsq > 0, nsq, 1)), 0.0)
    j = int(np.argmax(ratios))
    return SieveReport(r, Q, M, float(lhs[j]), float(nsq[j]), delta, float(ratios[j]), term, len(fam), seed)


def ratio_sweep(
    r: int,
    Q_list: Sequence[float],
    M_list: Sequence[float],
    trials: int,
    seed: int,
    primitive_only: bool = False,
) -> list[SieveReport]:
    if trials < 1:
        raise DomainError("trials must be >= 1")
    return [ratio_cell(r, Q, M, trials, seed, primitive_only) for Q in Q_list for M in M_list]


def top_singular_value(
    a: np.ndarray, tol: float = 1e-8, max_iter: int = 10_000, seed: int = 0
) -> float:
    """Largest singular value of ``a`` by power iteration on ``a^H a``."""
    if a.size == 0:
        return 0.0
    g = a.conj().T @ a
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(g.shape[0]) + 1j * rng.standard_normal(g.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = g @ v
        new = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        if abs(new - lam) <= tol * abs(new):
            return math.sqrt(max(new, 0.0))
        lam = new
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def duality_gap(r: int, Q: float, M: float, primitive_only: bool = False) -> float:
    """|sigma_max(T) - sigma_max(T*)| / sigma_max(T) for t_{chi, m} = chi(m)."""
    fam = character_family(r, Q, primitive_only)
    ms = support(M, r)
    if not len(fam) or not len(ms):
        return 0.0
    t = character_matrix(fam, ms)
    if max(t.shape) > 2000:
        raise DomainError(f"matrix {t.shape} too large for the dense check")
    s1 = top_singular_value(t)
    s2 = top_singular_value(t.conj().T)
    return abs(s1 - s2) / s1 if s1 else 0.0
