"""r-th power residue symbols at split primes of Z[zeta_r].

A prime ideal above a split prime p is represented by (p, eta), eta being the
image of zeta_r in Z[zeta_r]/P = F_p.  The symbol of m is the exponent j with
m^((p-1)/r) = eta^j (mod p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arith_core import is_prime, primitive_root
from .dirichlet_chars import OrderRCharacter, UnityValue, enumerate_order_r
from .errors import CorrespondenceError, DomainError

SymbolValue = UnityValue


@dataclass(frozen=True)
class SplitPrimeSymbol:
    r: int
    p: int
    eta: int

    def __post_init__(self):
        if not (is_prime(self.p) and is_prime(self.r)) or self.p % self.r != 1:
            raise DomainError(f"p={self.p} does not split completely for r={self.r}")
        e = self.eta % self.p
        if pow(e, self.r, self.p) != 1 or e == 1:
            raise DomainError(f"eta={self.eta} is not a primitive {self.r}-th root of unity mod {self.p}")

    def __call__(self, m: int) -> SymbolValue:
        return residue_symbol(m, self)


def split_roots(p: int, r: int) -> list[int]:
    """Primitive r-th roots of unity mod p, ascending; empty unless p = 1 (mod r)."""
    if p % r == 0:
        raise DomainError("p must not be divisible by r")
    if p % r != 1:
        return []
    zeta = pow(primitive_root(p), (p - 1) // r, p)
    return sorted(pow(zeta, j, p) for j in range(1, r))


def symbols_above(p: int, r: int) -> list[SplitPrimeSymbol]:
    return [SplitPrimeSymbol(r, p, eta) for eta in split_roots(p, r)]


def residue_symbol(m: int, s: SplitPrimeSymbol) -> SymbolValue:
    if m % s.p == 0:
        return SymbolValue(None, s.r)
    target = pow(m, (s.p - 1) // s.r, s.p)
    x = 1
    for j in range(s.r):
        if x == target:
            return SymbolValue(j, s.r)
        x = x * s.eta % s.p
    raise AssertionError("Euler criterion produced a non-root of unity")


def to_dirichlet(s: SplitPrimeSymbol) -> OrderRCharacter:
    """The enumerated character mod p that agrees with the symbol on [1, p]."""
    symbol_exps = [residue_symbol(m, s).exponent for m in range(1, s.p + 1)]
    matches = []
    for chi in enumerate_order_r(s.p, s.r):
        tab = chi.exponents(range(1, s.p + 1)).tolist()
        if all((a if a is not None else -1) == b for a, b in zip(symbol_exps, tab)):
            matches.append(chi)
    if len(matches) != 1:
        raise CorrespondenceError(f"{len(matches)} characters agree with {s}")
    return matches[0]


def product_symbol(m: int, moduli: Sequence[SplitPrimeSymbol], r: int | None = None) -> SymbolValue:
    """Product of residue symbols over distinct split primes (exponents add)."""
    if not moduli:
        return SymbolValue(0, r if r is not None else 1)
    r = moduli[0].r
    if len({s.p for s in moduli}) != len(moduli):
        raise DomainError("moduli must lie above distinct primes")
    out = SymbolValue(0, r)
    for s in moduli:
        out = out * residue_symbol(m, s)
    return out
