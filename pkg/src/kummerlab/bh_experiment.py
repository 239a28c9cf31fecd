"""Desk-scale Bateman-Horn deviations for the family n^r + k.

For each k <= y the fibre sum  sum_{n <= x, n = n0 (M0)} Lambda(n^r + k)  is
compared with S(k) * x, where S is the truncated singular series.

Two evaluation paths exist.  :func:`lambda_sum` tests every fibre value with
Miller-Rabin and exact prime-power detection.  :func:`lambda_sums` handles all
k at once: for fixed n the values n^r + 1 .. n^r + y form an interval, which is
sieved.  Lambda sums are accumulated with ``math.fsum`` so both paths, any
chunking and any worker count give bit-identical floats.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .arith_core import U64_MAX, is_prime, mangoldt_bases, prime_power_base, sieve_primes
from .errors import DomainError, RangeError
from .singular_series import SingularSeriesParams, singular_series_batch

SIEVE_VALUE_LIMIT = 2**62


@dataclass(frozen=True)
class ExperimentConfig:
    r: int
    x: int
    y: int
    n0: int = 0
    M0: int = 1
    P: int = 10_000
    threshold: float = 1.0  # exceptional cutoff exponent B' in x / (log x)^B'
    workers: int = 1

    def __post_init__(self):
        if not is_prime(self.r):
            raise DomainError(f"r={self.r} must be prime")
        if self.x < 2 or self.y < 1:
            raise DomainError("need x >= 2 and y >= 1")
        if self.M0 < 1:
            raise DomainError("M0 must be positive")
        top = self.x**self.r + self.y
        if top > U64_MAX:
            raise RangeError(f"x^r + y = {top} exceeds the 64-bit domain")

    @property
    def series_params(self) -> SingularSeriesParams:
        return SingularSeriesParams(self.r, self.n0, self.M0, self.P)

    def fibre(self) -> range:
        """n in [1, x] with n = n0 (mod M0)."""
        first = 1 + (self.n0 - 1) % self.M0
        return range(first, self.x + 1, self.M0)


@dataclass(frozen=True)
class DeviationRecord:
    k: int
    lambda_sum: float
    expected: float
    deviation: float
    is_exceptional: bool
    degenerate: bool = False


def _fibre_value(n: int, k: int, r: int) -> int:
    v = n**r + k
    if v > U64_MAX:
        raise RangeError(f"{n}^{r} + {k} exceeds the 64-bit domain")
    if v < 1:
        raise DomainError(f"fibre value {v} is not positive")
    return v


def lambda_bases(k: int, cfg: ExperimentConfig) -> list[int]:
    """Primes p with Lambda(n^r + k) = log p, one per contributing n."""
    out = []
    for n in cfg.fibre():
        p = prime_power_base(_fibre_value(n, k, cfg.r))
        if p:
            out.append(p)
    return out


def lambda_sum(k: int, cfg: ExperimentConfig) -> float:
    return math.fsum(math.log(p) for p in lambda_bases(k, cfg))


def _sieve_chunk(args) -> tuple[np.ndarray, np.ndarray]:
    ns, r, y, base = args
    ks, ps = [], []
    for n in ns:
        lo = n**r + 1
        bases = mangoldt_bases(lo, lo + y - 1, base)
        hit = np.flatnonzero(bases)
        ks.append(hit + 1)
        ps.append(bases[hit])
    if not ks:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate(ks), np.concatenate(ps)


def _fsum_by_k(ks: np.ndarray, ps: np.ndarray, y: int) -> np.ndarray:
    order = np.argsort(ks, kind="stable")
    ks, logs = ks[order], np.log(ps[order].astype(np.float64))
    out = np.zeros(y, dtype=np.float64)
    bounds = np.searchsorted(ks, np.arange(1, y + 2))
    for k in range(1, y + 1):
        a, b = bounds[k - 1], bounds[k]
        if b > a:
            out[k - 1] = math.fsum(logs[a:b].tolist())
    return out


def lambda_sums(cfg: ExperimentConfig, workers: Optional[int] = None) -> np.ndarray:
    """Lambda fibre sums for every k in [1, y], via interval sieving."""
    ns = list(cfg.fibre())
    top = cfg.x**cfg.r + cfg.y
    if top >= SIEVE_VALUE_LIMIT:
        raise RangeError(f"fibre values up to {top} are beyond the sieve path")
    base = sieve_primes(max(math.isqrt(top) + 1, 2)).primes
    workers = workers or cfg.workers
    n_chunks = max(1, min(len(ns), 4 * workers))
    chunks = [ns[i::n_chunks] for i in range(n_chunks)]
    jobs = [(c, cfg.r, cfg.y, base) for c in chunks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sieve_chunk, jobs))
    else:
        parts = [_sieve_chunk(j) for j in jobs]
    ks = np.concatenate([p[0] for p in parts])
    ps = np.concatenate([p[1] for p in parts])
    # fsum is correctly rounded, so chunk order cannot change the result
    return _fsum_by_k(ks, ps, cfg.y)


def cutoff(x: float, exponent: float) -> float:
    return x / math.log(x) ** exponent


def run_experiment(cfg: ExperimentConfig) -> tuple[list[DeviationRecord], dict]:
    """Per-k deviation records plus the second-moment summary."""
    t0 = time.perf_counter()
    ks = np.arange(1, cfg.y + 1)
    lam = lambda_sums(cfg)
    series = singular_series_batch(ks, cfg.series_params)
    expected = series * cfg.x
    dev = lam - expected
    if cfg.M0 > 1:
        vals = (pow(cfg.n0, cfg.r, cfg.M0) + ks) % cfg.M0
        degenerate = np.gcd(vals, cfg.M0) > 1
    else:
        degenerate = np.zeros(cfg.y, dtype=bool)
    cut = cutoff(cfg.x, cfg.threshold)
    records = [
        DeviationRecord(
            k=int(k),
            lambda_sum=float(a),
            expected=float(e),
            deviation=float(d),
            is_exceptional=bool(abs(d) > cut and not g),
            degenerate=bool(g),
        )
        for k, a, e, d, g in zip(ks, lam, expected, dev, degenerate)
    ]
    summary = summarize(records, cfg)
    summary["wall_time"] = time.perf_counter() - t0
    return records, summary


def summarize(records: list[DeviationRecord], cfg: ExperimentConfig) -> dict:
    live = [rec for rec in records if not rec.degenerate]
    m2 = math.fsum(rec.deviation**2 for rec in live) / len(live) if live else 0.0
    exc = exceptional_report(live, cfg.x, C=1.0, exponent=cfg.threshold)
    return {
        "m2": m2,
        "m2_over_x2": m2 / cfg.x**2,
        "exceptional_count": exc["count"],
        "exceptional_fraction": exc["fraction"],
        "degenerate_count": len(records) - len(live),
        # the worker count is left out: it must not change any output byte
        "config": {k: v for k, v in asdict(cfg).items() if k != "workers"},
    }


def exceptional_report(
    records, x: float, C: float = 1.0, exponent: float = 1.0, cut: Optional[float] = None
) -> dict:
    """Count k with |deviation| > x / (log x)^exponent (or an explicit ``cut``).

    Also reports ``count * (log x)^C / y``, the quantity the exceptional-set
    bound keeps bounded.
    """
    if cut is None:
        cut = cutoff(x, exponent)
    n = len(records)
    count = sum(1 for rec in records if abs(rec.deviation) > cut)
    return {
        "cutoff": cut,
        "count": count,
        "fraction": count / n if n else 0.0,
        "scaled": count * math.log(x) ** C / n if n else 0.0,
    }
