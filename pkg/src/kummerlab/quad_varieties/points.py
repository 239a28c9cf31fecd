"""Integral points on y^2 - a z^2 = t^r + k (nonzero), the fibre-prime pipeline,
conic solubility over Q, and the n1^2 + d n2^2 + n3^r representation survey.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..arith_core import factorize, iroot, is_prime, is_squarefree
from ..errors import DomainError, PreconditionError
from .forms import quad_field
from .local import LocalPoint, hilbert_symbol, primitive_local_point, relevant_places


@dataclass(frozen=True)
class VarietyInstance:
    a: int
    r: int
    k: int

    def __post_init__(self):
        if self.a in (0, 1) or not is_squarefree(abs(self.a)):
            raise DomainError(f"a={self.a} must be squarefree and not 0 or 1")
        if not is_prime(self.r):
            raise DomainError(f"r={self.r} must be prime")
        if self.k < 1:
            raise DomainError("k must be a positive integer")

    @property
    def admissible(self) -> bool:
        """No prime dividing a is 1 mod r."""
        return all(p % self.r != 1 for p in factorize(abs(self.a)))

    @property
    def two_unramified(self) -> bool:
        return self.a % 4 == 1

    @property
    def ramified(self) -> tuple[int, ...]:
        return quad_field(self.a).S


@dataclass(frozen=True)
class IntegralPoint:
    y: int
    z: int
    t: int

    def satisfies(self, inst: VarietyInstance) -> bool:
        rhs = self.t**inst.r + inst.k
        return rhs != 0 and self.y**2 - inst.a * self.z**2 == rhs


@dataclass
class PointSearch:
    """Outcome of a point search; ``point`` is None when the budget ran out."""

    point: Optional[IntegralPoint]
    method: str
    budget: int
    fibre_prime: Optional[int] = None
    congruence: Optional[tuple[int, int]] = None
    local_points: list[LocalPoint] = field(default_factory=list)
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.point is not None


def find_fiber_prime(
    a: Optional[int], r: int, k: int, n0: int, M0: int, N: int, start: int = 1
) -> Optional[tuple[int, int]]:
    """Least n in [max(start, 1), N] with n = n0 (mod M0) and q = n^r + k prime.

    Returns (n, q) or None.  A common factor g = gcd(n0^r + k, M0) > 1 is not
    rejected: every fibre value is then a multiple of g, so only q = g can occur.
    When ``a`` is given, gcd(q, a) = 1 is asserted.
    """
    if M0 < 1:
        raise DomainError("M0 must be positive")
    start = max(start, 1)
    n = start + (n0 - start) % M0
    while n <= N:
        q = n**r + k
        if q > 1 and is_prime(q):
            if a is not None and math.gcd(q, a) != 1:
                raise AssertionError(f"fibre prime {q} shares a factor with a={a}")
            return n, q
        n += M0
    return None


def represent_by_form(a: int, q: int) -> Optional[tuple[int, int]]:
    """Exhaustive y, z >= 0 with y^2 - a z^2 = q for a < 0 (least z first)."""
    if a >= 0:
        raise DomainError("exhaustive representation needs a < 0")
    if q < 0:
        return None
    zmax = math.isqrt(q // -a)
    z = np.arange(zmax + 1, dtype=object if q > 2**52 else np.int64)
    rest = q + a * z * z
    if rest.dtype == object:
        for zi, v in zip(z.tolist(), rest.tolist()):
            y = math.isqrt(v)
            if y * y == v:
                return y, zi
        return None
    y = np.floor(np.sqrt(rest.astype(np.float64))).astype(np.int64)
    for adj in (-1, 0, 1):
        yy = y + adj
        hit = np.flatnonzero((yy >= 0) & (yy * yy == rest))
        if len(hit):
            i = int(hit[0])
            return int(yy[i]), int(z[i])
    return None


def represent_indefinite(a: int, q: int, budget: int) -> Optional[tuple[int, int]]:
    """y^2 - a z^2 = q for a > 0, searching 0 <= z <= budget (inconclusive on failure)."""
    for z in range(budget + 1):
        v = q + a * z * z
        if v >= 0:
            y = math.isqrt(v)
            if y * y == v:
                return y, z
    return None


def _represent(a: int, q: int, budget: int) -> Optional[tuple[int, int]]:
    return represent_by_form(a, q) if a < 0 else represent_indefinite(a, q, budget)


def _crt(residues: list[tuple[int, int]]) -> tuple[int, int]:
    n0, M0 = 0, 1
    for t, p in residues:
        # solve n = n0 (M0), n = t (p) for coprime M0, p
        n0 = n0 + M0 * ((t - n0) * pow(M0, -1, p) % p)
        M0 *= p
    return n0 % M0, M0


def local_congruence(inst: VarietyInstance) -> tuple[list[LocalPoint], int, int]:
    """Primitive local points at each ramified prime, glued by CRT into n = n0 (mod M0)."""
    locs = [primitive_local_point(inst.a, inst.r, inst.k, p) for p in inst.ramified]
    n0, M0 = _crt([(lp.t, lp.p) for lp in locs])
    return locs, n0, M0


def _check_admissible(inst: VarietyInstance):
    if not inst.admissible:
        raise PreconditionError(f"a={inst.a} has a prime factor = 1 mod r={inst.r}")
    if not inst.two_unramified:
        raise PreconditionError(f"2 ramifies in Q(sqrt {inst.a})")


def pipeline_point_search(inst: VarietyInstance, budget: int) -> PointSearch:
    """Local points -> CRT congruence -> fibre prime -> norm-form representation.

    Walks the fibre n = n0 (mod M0), 0 <= n <= budget.  The unit fibre value 1
    is represented trivially; otherwise each prime fibre value is tried.
    """
    _check_admissible(inst)
    locs, n0, M0 = local_congruence(inst)
    out = PointSearch(None, "pipeline", budget, congruence=(n0, M0), local_points=locs)
    n = n0
    while n <= budget:
        q = n**inst.r + inst.k
        if q == 1:
            out.point = IntegralPoint(1, 0, n)
            return out
        hit = find_fiber_prime(inst.a, inst.r, inst.k, n0, M0, budget, start=n)
        if hit is None:
            break
        n, q = hit
        rep = _represent(inst.a, q, budget)
        if rep is not None:
            out.point = IntegralPoint(rep[0], rep[1], n)
            out.fibre_prime = q
            if not out.point.satisfies(inst):
                raise AssertionError(f"pipeline produced a non-point {out.point}")
            return out
        n += M0
    out.reason = "budget exhausted"
    return out


def direct_point_search(inst: VarietyInstance, budget: int) -> PointSearch:
    """Try t = 0, 1, -1, 2, -2, ... with |t| <= budget and represent t^r + k."""
    out = PointSearch(None, "direct", budget)
    for m in range(budget + 1):
        for t in ((0,) if m == 0 else (m, -m)):
            v = t**inst.r + inst.k
            if v == 0 or (inst.a < 0 and v < 0):
                continue
            rep = _represent(inst.a, v, budget)
            if rep is not None:
                out.point = IntegralPoint(rep[0], rep[1], t)
                return out
    out.reason = "budget exhausted"
    return out


def integral_point_search(inst: VarietyInstance, budget: int, method: str = "pipeline") -> PointSearch:
    _check_admissible(inst)
    if method == "pipeline":
        return pipeline_point_search(inst, budget)
    if method == "direct":
        return direct_point_search(inst, budget)
    raise DomainError(f"unknown method {method!r}")


@dataclass(frozen=True)
class ConicResult:
    status: str  # "point", "locally insoluble", "locally soluble, point not found"
    point: Optional[tuple[int, int, int]] = None  # (y, z, w) with y^2 - a z^2 = q w^2
    failing_places: tuple = ()


def conic_rational_point(a: int, q: int, height: int = 200) -> ConicResult:
    """Decide y^2 - a z^2 = q over Q: Hilbert symbols everywhere, then a bounded search."""
    bad = tuple(v for v in relevant_places(a, q) if hilbert_symbol(a, q, v) != 1)
    if bad:
        return ConicResult("locally insoluble", failing_places=bad)
    for w in range(1, height + 1):
        for z in range(height + 1):
            v = q * w * w + a * z * z
            if v >= 0:
                y = math.isqrt(v)
                if y * y == v:
                    return ConicResult("point", (y, z, w))
    return ConicResult("locally soluble, point not found")


@dataclass
class DensityReport:
    d: int
    r: int
    K: int
    B: float
    rows: list[tuple[int, bool, int, int, int]]  # (k, representable, n1, n2, n3)

    @property
    def fraction(self) -> float:
        return sum(row[1] for row in self.rows) / len(self.rows) if self.rows else 0.0

    @property
    def exceptions(self) -> list[int]:
        return [row[0] for row in self.rows if not row[1]]


def density_report(d: int, r: int, K: int, B: float = 2.0) -> DensityReport:
    """Which k <= K are n1^2 + d n2^2 + n3^r with n3 in [-ceil((BK)^(1/r)), floor(K^(1/r))]."""
    if d % 4 != 3 or not is_squarefree(d) or quad_field(-d).h > 2:
        raise PreconditionError(f"d={d} is not in the class-number-at-most-2 list")
    if r < 3 or not is_prime(r) or any(p % r == 1 for p in factorize(d)):
        raise PreconditionError(f"r={r} is not admissible for d={d}")
    if K < 1:
        return DensityReport(d, r, K, B, [])
    lo = iroot(math.ceil(B * K), r)
    if lo**r < B * K:
        lo += 1
    hi = iroot(K, r)
    vmax = K + lo**r
    w1 = np.full(vmax + 1, -1, dtype=np.int64)
    w2 = np.full(vmax + 1, -1, dtype=np.int64)
    n1 = np.arange(math.isqrt(vmax) + 1, dtype=np.int64)
    for n2 in range(math.isqrt(vmax // d) + 1):
        vals = n1 * n1 + d * n2 * n2
        ok = vals <= vmax
        v, x = vals[ok], n1[ok]
        fresh = w1[v] < 0
        w1[v[fresh]] = x[fresh]
        w2[v[fresh]] = n2
    ks = np.arange(1, K + 1, dtype=np.int64)
    c1 = np.full(K, -1, dtype=np.int64)
    c2 = np.full(K, -1, dtype=np.int64)
    c3 = np.zeros(K, dtype=np.int64)
    order = sorted(range(-lo, hi + 1), key=lambda t: (abs(t), t < 0))
    for t in order:
        v = ks - t**r
        inside = (v >= 0) & (v <= vmax)
        todo = inside & (c1 < 0)
        idx = np.flatnonzero(todo)
        hit = idx[w1[v[idx]] >= 0]
        c1[hit] = w1[v[hit]]
        c2[hit] = w2[v[hit]]
        c3[hit] = t
    rows = []
    for k, a1, a2, a3 in zip(ks.tolist(), c1.tolist(), c2.tolist(), c3.tolist()):
        if a1 >= 0:
            if a1 * a1 + d * a2 * a2 + a3**r != k:
                raise AssertionError(f"bad witness for k={k}")
            rows.append((k, True, a1, a2, a3))
        else:
            rows.append((k, False, 0, 0, 0))
    return DensityReport(d, r, K, B, rows)
