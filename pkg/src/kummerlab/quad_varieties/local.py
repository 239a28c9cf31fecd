"""Local arithmetic: valuations, Hilbert symbols, Hensel lifting, and the
primitive local points of y^2 - a z^2 = t^r + k at ramified primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from ..arith_core import factorize, is_prime
from ..errors import DomainError, LiftError, PreconditionError
from .forms import discriminant

INF = math.inf  # the real place
Rational = Union[int, Fraction]


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _as_integer_class(x: Rational) -> int:
    """An integer in the same square class as the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("Hilbert symbol arguments must be nonzero")
    return x.numerator * x.denominator


def hilbert_symbol(a: Rational, b: Rational, place) -> int:
    """(a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over Q_v.

    ``place`` is a prime or :data:`INF`.
    """
    a, b = _as_integer_class(a), _as_integer_class(b)
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    if not is_prime(p):
        raise DomainError(f"place {place} is neither a prime nor infinity")
    alpha, beta = valuation(a, p), valuation(b, p)
    u, v = a // p**alpha, b // p**beta
    if p == 2:
        eps = lambda w: ((w - 1) // 2) % 2  # noqa: E731
        omega = lambda w: ((w * w - 1) // 8) % 2  # noqa: E731
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = (-1) ** (alpha * beta * ((p - 1) // 2) % 2)
    return s * legendre(u, p) ** beta * legendre(v, p) ** alpha


def relevant_places(*xs: Rational) -> list:
    """2, the primes dividing any argument, and infinity."""
    primes = {2}
    for x in xs:
        x = Fraction(x)
        for n in (abs(x.numerator), x.denominator):
            if n > 1:
                primes.update(factorize(n))
    return sorted(primes) + [INF]


def _poly_eval(coeffs: Sequence[int], x: int, mod: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


def _derivative(coeffs: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_lift(coeffs: Sequence[int], root0: int, p: int, e: int) -> int:
    """Lift a simple root of f mod p to a root mod p^e.

    ``coeffs`` lists f's coefficients from the constant term up.
    """
    if e < 1:
        raise DomainError("e must be >= 1")
    if _poly_eval(coeffs, root0, p) != 0:
        raise LiftError(f"{root0} is not a root mod {p}")
    df = _derivative(coeffs)
    if _poly_eval(df, root0, p) == 0:
        raise LiftError(f"{root0} is not a simple root mod {p}")
    x, prec = root0 % p, 1
    while prec < e:
        prec = min(2 * prec, e)
        mod = p**prec
        x = (x - _poly_eval(coeffs, x, mod) * pow(_poly_eval(df, x, mod), -1, mod)) % mod
    return x % p**e


@dataclass(frozen=True)
class LocalPoint:
    """A primitive point mod p: norm value ``s`` (a unit square) and ``t`` mod p.

    ``route`` is ``"square"`` for t^r + k = s with s in {1, 4}, or ``"y2-k"``
    for the p = 3, k = 1 (mod 3) case where t = 0 and y^2 = k lifts from y = 1.
    """

    p: int
    s: int
    t: int
    route: str


def primitive_local_point(a: int, r: int, k: int, p: int) -> LocalPoint:
    if a % 4 != 1:
        raise PreconditionError("2 must be unramified (a = 1 mod 4)")
    if any(q % r == 1 for q in factorize(abs(a))):
        raise PreconditionError(f"some prime dividing a={a} is 1 mod r={r}")
    if discriminant(a) % p:
        raise PreconditionError(f"p={p} is not ramified in Q(sqrt {a})")
    if p % r == 1:
        raise PreconditionError(f"p={p} is 1 mod r={r}")
    if k % p != 1:
        s = 1
    elif p >= 5:
        s = 4
    else:
        # p = 3 and k = 1 (mod 3): y^2 = k has the simple root y = 1 mod 3
        return LocalPoint(p, k % p, 0, "y2-k")
    # u -> u^r is a bijection mod p, inverted by the exponent r^-1 mod p-1
    t = pow((s - k) % p, pow(r, -1, p - 1), p) if (s - k) % p else 0
    if (pow(t, r, p) + k - s) % p:
        raise AssertionError("local point failed verification")
    return LocalPoint(p, s, t, "square")
