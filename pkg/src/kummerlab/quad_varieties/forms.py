"""Quadratic fields Q(sqrt a) through binary quadratic forms.

Imaginary class numbers count reduced positive definite forms.  For real
fields the narrow class number is the number of cycles of reduced indefinite
forms under the rho operator; the wide class number then follows from the
norm of the fundamental unit, read off the continued fraction of the ring
generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..arith_core import factorize, is_squarefree
from ..errors import DomainError


@dataclass(frozen=True)
class BinaryForm:
    """The form A x^2 + B xy + C y^2."""

    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    @property
    def is_primitive(self) -> bool:
        return math.gcd(self.A, self.B, self.C) == 1

    def is_reduced(self) -> bool:
        """Reducedness for positive definite forms."""
        A, B, C = self.A, self.B, self.C
        if not abs(B) <= A <= C:
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def reduce(self) -> "BinaryForm":
        """Gauss reduction of a positive definite form."""
        if self.discriminant >= 0 or self.A <= 0:
            raise DomainError("reduce() handles positive definite forms only")
        A, B, C = self.A, self.B, self.C
        while True:
            if C < A or (C == A and B < 0):
                A, B, C = C, -B, A
                continue
            if abs(B) > A or B == -A:
                k = (A - B) // (2 * A)
                B, C = B + 2 * k * A, A * k * k + B * k + C
                continue
            return BinaryForm(A, B, C)

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y


def discriminant(a: int) -> int:
    return a if a % 4 == 1 else 4 * a


def reduced_forms(D: int) -> list[BinaryForm]:
    """Primitive reduced positive definite forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = BinaryForm(a, b, c)
            if c >= a and f.is_reduced() and f.is_primitive:
                out.append(f)
        a += 1
    return out


def _reduced_indefinite(D: int) -> list[BinaryForm]:
    s = math.isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        num = b * b - D  # = 4ac < 0
        for aa in range((s - b) // 2 + 1, (s + b) // 2 + 1):
            if aa == 0 or num % (4 * aa):
                continue
            for a in (aa, -aa):
                f = BinaryForm(a, b, num // (4 * a))
                if f.is_primitive:
                    out.append(f)
    return out


def _rho(f: BinaryForm, s: int) -> BinaryForm:
    c2 = 2 * abs(f.C)
    b = s - (s + f.B) % c2
    D = f.discriminant
    return BinaryForm(f.C, b, (b * b - D) // (4 * f.C))


def narrow_class_number_real(D: int) -> int:
    """Number of rho-cycles of reduced primitive forms of discriminant D > 0."""
    if D <= 0 or math.isqrt(D) ** 2 == D:
        raise DomainError(f"{D} is not a positive non-square discriminant")
    s = math.isqrt(D)
    forms = set(_reduced_indefinite(D))
    cycles = 0
    while forms:
        start = forms.pop()
        cycles += 1
        f = _rho(start, s)
        while f != start:
            forms.discard(f)
            f = _rho(f, s)
    return cycles


def fundamental_unit(a: int) -> tuple[int, int, int]:
    """Fundamental unit of Q(sqrt a), a > 1 squarefree, as (x, y, norm).

    The unit is x + y*w with w = sqrt(a), or w = (1 + sqrt(a))/2 when
    a = 1 (mod 4).  Found as the first convergent of w's continued fraction
    whose norm is +-1.
    """
    if a < 2 or not is_squarefree(a):
        raise DomainError("need a squarefree a > 1")
    if a % 4 == 1:
        P, Q = 1, 2

        def norm(x, y):
            return x * x + x * y - y * y * (a - 1) // 4
    else:
        P, Q = 0, 1

        def norm(x, y):
            return x * x - a * y * y

    s = math.isqrt(a)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        q = (P + s) // Q
        h0, h1 = h1, q * h1 + h0
        k0, k1 = k1, q * k1 + k0
        # h1/k1 ~ w, so h1 - k1*w is small and the conjugate unit is x + y*w
        x, y = (h1 - k1, k1) if a % 4 == 1 else (h1, k1)
        n = norm(h1, -k1)
        if abs(n) == 1:
            return x, y, n
        P = q * Q - P
        Q = (a - P * P) // Q


@dataclass(frozen=True)
class QuadField:
    a: int
    D: int
    S: tuple[int, ...]
    two_unramified: bool
    h: int
    h_plus: int
    unit_norm: Optional[int] = None


def quad_field(a: int) -> QuadField:
    if a in (0, 1) or not is_squarefree(abs(a)):
        raise DomainError(f"a={a} must be squarefree and not 0 or 1")
    D = discriminant(a)
    S = tuple(sorted(factorize(abs(D))))
    if a < 0:
        h = len(reduced_forms(D))
        return QuadField(a, D, S, a % 4 == 1, h, h)
    h_plus = narrow_class_number_real(D)
    _, _, n = fundamental_unit(a)
    h = h_plus if n == -1 else h_plus // 2
    return QuadField(a, D, S, a % 4 == 1, h, h_plus, n)


def class_list(bound: int) -> list[int]:
    """Squarefree d <= bound, d = 3 (mod 4), with Q(sqrt -d) of class number <= 2."""
    out = []
    for d in range(3, bound + 1, 4):
        if is_squarefree(d) and quad_field(-d).h <= 2:
            out.append(d)
    return out
