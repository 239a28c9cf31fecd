"""kummerlab command line.

    kummerlab bh-run --r 3 --x 1000 --y 10000 --out-dir runs/bh
    kummerlab singular-series --r 3 --k-max 100
    kummerlab sieve-lab --r 3 --Q 5,10,20,40 --M 25,50,100 --trials 100 --seed 1
    kummerlab class-list --bound 427
    kummerlab variety-solve --a -3 --r 5 --k 6 --budget 1000
    kummerlab density --d 3 --r 5 --K 10000
    kummerlab selftest

Values come from built-in defaults, then ``--config FILE`` (JSON), then flags.
Exit status: 0 ok, 1 usage, 2 runtime failure, 3 selftest invariant violation.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Any, Callable, Optional

from . import __version__
from .arith_core import is_prime
from .errors import DomainError, IdentityViolation, PreconditionError
from .io import ConfigError, RunConfig, csv_text, emit, json_text, load_config

WORKERS_ENV = "KUMMERLAB_WORKERS"

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_INVARIANT = 0, 1, 2, 3


@dataclass(frozen=True)
class Param:
    name: str
    kind: Callable[[str], Any]
    default: Any = None  # None with required=True means "must be supplied"
    required: bool = False
    check: Optional[Callable[[Any], bool]] = None
    why: str = ""
    help: str = ""
    flags: tuple[str, ...] = ()  # extra spellings besides --name
    switch: bool = False  # a bare flag meaning true


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, int) and v in (0, 1):
        return bool(v)
    text = str(v).lower()
    if text in ("1", "true", "yes"):
        return True
    if text in ("0", "false", "no"):
        return False
    raise ValueError(v)


def _float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


def _prime(v) -> bool:
    return is_prime(v)


def _pos(v) -> bool:
    return v >= 1


R = Param("r", int, required=True, check=_prime, why="must be prime", help="prime exponent r")

SCHEMA: dict[str, list[Param]] = {
    "bh-run": [
        R,
        Param("x", int, required=True, check=lambda v: v >= 2, why="must be >= 2", help="fibre bound"),
        Param("y", int, required=True, check=_pos, why="must be >= 1", help="k range bound"),
        Param("n0", int, 0),
        Param("M0", int, 1, check=_pos, why="must be >= 1", flags=("--m0",)),
        Param("P", int, 10_000, check=lambda v: v >= 3, why="must be >= 3", flags=("--trunc-p",)),
        Param("threshold", float, 1.0, check=lambda v: v >= 0, why="must be >= 0",
              help="exceptional cutoff x / (log x)^threshold"),
    ],
    "singular-series": [
        R,
        Param("k_min", int, 1),
        Param("k_max", int, required=True),
        Param("n0", int, 0),
        Param("M0", int, 1, check=_pos, why="must be >= 1", flags=("--m0",)),
        Param("P", int, 10_000, check=lambda v: v >= 3, why="must be >= 3", flags=("--trunc-p",)),
    ],
    "sieve-lab": [
        Param("r", int, 3, check=_prime, why="must be prime"),
        Param("Q", _float_list, [5.0, 10.0, 20.0, 40.0], check=lambda v: v and min(v) >= 1,
              why="needs values >= 1", help="comma-separated Q values", flags=("--q-list",)),
        Param("M", _float_list, [25.0, 50.0, 100.0, 200.0, 400.0], check=lambda v: v and min(v) >= 1,
              why="needs values >= 1", help="comma-separated M values", flags=("--m-list",)),
        Param("trials", int, 100, check=_pos, why="must be >= 1"),
        Param("primitive_only", _bool, False, switch=True,
              help="only primitive characters of squarefree split moduli"),
        Param("duality", _bool, False, switch=True, help="also report the power-iteration duality gap"),
    ],
    "class-list": [
        Param("bound", int, required=True, check=lambda v: v >= 0, why="must be >= 0"),
    ],
    "variety-solve": [
        Param("a", int, required=True),
        R,
        Param("k", int, required=True, check=_pos, why="must be >= 1"),
        Param("budget", int, 1000, check=lambda v: v >= 0, why="must be >= 0"),
        Param("method", str, "both", check=lambda v: v in ("pipeline", "direct", "both"),
              why="must be pipeline, direct or both"),
    ],
    "density": [
        Param("d", int, required=True),
        R,
        Param("K", int, required=True, check=lambda v: v >= 0, why="must be >= 0"),
        Param("b", float, 2.0, check=lambda v: v > 0, why="must be > 0"),
    ],
    "selftest": [],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kummerlab", description="Kummer-family number theory experiments")
    p.add_argument("--version", action="version", version=f"kummerlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, params in SCHEMA.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config file; flags override its values")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (flag > config > ${WORKERS_ENV} > 1)")
        sp.add_argument("--out-dir", "--out", dest="out_dir", default=None,
                        help="write CSV, summary and manifest here")
        for prm in params:
            flags = ("--" + prm.name.replace("_", "-"),) + prm.flags
            if prm.switch:
                sp.add_argument(*flags, dest=prm.name, action="store_const", const="1", default=None,
                                help=prm.help or None)
            else:
                sp.add_argument(*flags, dest=prm.name, type=str, default=None, help=prm.help or None)
    return p


def _coerce(prm: Param, value):
    try:
        v = prm.kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{prm.name}: cannot parse {value!r}") from None
    if prm.check is not None and not prm.check(v):
        raise ConfigError(f"{prm.name}={value!r} {prm.why or 'is out of range'}")
    return v


def parse_config(argv: list[str]) -> RunConfig:
    """Merge defaults, an optional config file and flags into a validated RunConfig."""
    ns = build_parser().parse_args(argv)
    schema = {prm.name: prm for prm in SCHEMA[ns.command]}
    file = load_config(ns.config) if ns.config else {}
    if file.get("command", ns.command) != ns.command:
        raise ConfigError(f"command: config file says {file['command']!r}, argv says {ns.command!r}")
    fparams = file.get("params", {})
    if not isinstance(fparams, dict):
        raise ConfigError("params: must be an object")
    unknown = sorted(set(fparams) - set(schema))
    if unknown:
        raise ConfigError(f"unknown parameter(s) for {ns.command}: {', '.join(unknown)}")
    params = {}
    for name, prm in schema.items():
        flag = getattr(ns, name)
        if flag is not None:
            params[name] = _coerce(prm, flag)
        elif name in fparams:
            params[name] = _coerce(prm, fparams[name])
        elif prm.required:
            raise ConfigError(f"{name}: required (flag --{name.replace('_', '-')} or config params)")
        else:
            params[name] = prm.default
    workers = ns.workers
    if workers is None:
        workers = file.get("workers")
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        try:
            workers = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV}={env!r} is not an integer") from None
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError(f"workers={workers!r} must be a positive integer")
    seed = ns.seed if ns.seed is not None else file.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed={seed!r} must be a non-negative integer")
    out_dir = ns.out_dir if ns.out_dir is not None else file.get("out_dir")
    return RunConfig(ns.command, params, seed, workers, out_dir)


# -- subcommands: each returns (csv name or None, csv text or None, summary dict) --


def _bh_run(cfg: RunConfig):
    from .bh_experiment import ExperimentConfig, run_experiment

    p = cfg.params
    exp = ExperimentConfig(p["r"], p["x"], p["y"], p["n0"], p["M0"], p["P"], p["threshold"], cfg.workers)
    records, summary = run_experiment(exp)
    summary.pop("wall_time")
    rows = [(r.k, r.lambda_sum, r.expected, r.deviation, r.is_exceptional) for r in records]
    header = ("k", "lambda_sum", "expected", "deviation", "exceptional")
    return "bh.csv", csv_text(header, rows), summary


def _singular_series(cfg: RunConfig):
    from .singular_series import SingularSeriesParams, scan_rows

    p = cfg.params
    if p["k_max"] < p["k_min"]:
        raise ConfigError("k_max: must be >= k_min")
    params = SingularSeriesParams(p["r"], p["n0"], p["M0"], p["P"])
    rows = scan_rows(range(p["k_min"], p["k_max"] + 1), params)
    worst = max((row[3] for row in rows), default=0.0)
    text = csv_text(("k", "S_trunc", "P", "stability_metric"), rows)
    return "singular_series.csv", text, {"rows": len(rows), "max_stability_metric": worst}


def _sieve_lab(cfg: RunConfig):
    from .large_sieve_lab import duality_gap, ratio_sweep

    p = cfg.params
    reps = ratio_sweep(p["r"], p["Q"], p["M"], p["trials"], cfg.seed, p["primitive_only"])
    rows = [(s.r, s.Q, s.M, s.lhs, s.delta, s.ratio, s.active_term, cfg.seed) for s in reps]
    summary = {"cells": len(rows), "max_ratio": max((s.ratio for s in reps), default=0.0)}
    if p["duality"]:
        summary["max_duality_gap"] = max(
            (duality_gap(p["r"], Q, M, p["primitive_only"]) for Q in p["Q"] for M in p["M"]), default=0.0
        )
    header = ("r", "Q", "M", "lhs_max", "delta", "ratio", "active_term", "seed")
    return "sieve.csv", csv_text(header, rows), summary


def _class_list(cfg: RunConfig):
    from .quad_varieties.forms import class_list, quad_field

    ds = class_list(cfg.params["bound"])
    rows = [(d, quad_field(-d).h) for d in ds]
    return "class_list.csv", csv_text(("d", "h"), rows), {"list": ds, "count": len(ds)}


def _point_dict(res) -> dict:
    out = {"found": res.found, "method": res.method, "budget": res.budget}
    if res.found:
        out["point"] = {"y": res.point.y, "z": res.point.z, "t": res.point.t}
    else:
        out["reason"] = res.reason
    if res.congruence is not None:
        out["congruence"] = {"n0": res.congruence[0], "M0": res.congruence[1]}
        out["fibre_prime"] = res.fibre_prime
    return out


def _variety_solve(cfg: RunConfig):
    from .quad_varieties.points import VarietyInstance, integral_point_search

    p = cfg.params
    inst = VarietyInstance(p["a"], p["r"], p["k"])
    methods = ("pipeline", "direct") if p["method"] == "both" else (p["method"],)
    summary = {"a": inst.a, "r": inst.r, "k": inst.k}
    for m in methods:
        res = integral_point_search(inst, p["budget"], m)
        if res.found and not res.point.satisfies(inst):
            raise IdentityViolation(f"{m} returned a non-point {res.point}")
        summary[m] = _point_dict(res)
    return None, None, summary


def _density(cfg: RunConfig):
    from .quad_varieties.points import density_report

    p = cfg.params
    rep = density_report(p["d"], p["r"], p["K"], p["b"])
    text = csv_text(("k", "representable", "n1", "n2", "n3"), rep.rows)
    summary = {"d": rep.d, "r": rep.r, "K": rep.K, "B": rep.B, "fraction": rep.fraction,
               "exceptions": rep.exceptions}
    return "density.csv", text, summary


def selftest() -> list[tuple[str, bool]]:
    """Quick invariant checks; each entry is (name, passed)."""
    from .arith_core import sieve_primes
    from .cyclotomic_residue import symbols_above, to_dirichlet
    from .dirichlet_chars import enumerate_order_r, gauss_sum
    from .quad_varieties.forms import class_list
    from .quad_varieties.local import INF, hilbert_symbol, relevant_places
    from .singular_series import count_roots, count_roots_via_characters

    checks = []
    checks.append(("pi(10^5) = 9592", len(sieve_primes(10**5).primes) == 9592))
    ok = all(
        count_roots(k, p, r).count == count_roots_via_characters(k, p, r)
        for r, p in ((3, 7), (3, 13), (5, 11), (7, 29))
        for k in range(p)
    )
    checks.append(("root count character identity", ok))
    ok = all(
        abs(abs(gauss_sum(chi)) ** 2 - chi.q) < 1e-9 for q in (7, 13, 31, 91) for chi in enumerate_order_r(q, 3)
    )
    checks.append(("|tau(chi)|^2 = q", ok))
    ok = all(
        sorted(to_dirichlet(s).label for s in symbols_above(p, r)) == sorted(c.label for c in enumerate_order_r(p, r))
        for r, p in ((3, 7), (5, 11), (7, 29))
    )
    checks.append(("symbol/character correspondence", ok))
    ok = all(
        math.prod(hilbert_symbol(a, b, v) for v in relevant_places(a, b)) == 1
        for a in range(-12, 13) for b in range(-12, 13) if a and b
    )
    checks.append(("Hilbert reciprocity", ok and hilbert_symbol(-1, -1, INF) == -1))
    checks.append(("class list to 100", class_list(100) == [3, 7, 11, 15, 19, 35, 43, 51, 67, 91]))
    return checks


COMMANDS = {
    "bh-run": _bh_run,
    "singular-series": _singular_series,
    "sieve-lab": _sieve_lab,
    "class-list": _class_list,
    "variety-solve": _variety_solve,
    "density": _density,
}


def run(cfg: RunConfig) -> int:
    if cfg.command == "selftest":
        checks = selftest()
        for name, ok in checks:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
        return EXIT_OK if all(ok for _, ok in checks) else EXIT_INVARIANT
    t0 = time.perf_counter()
    name, text, summary = COMMANDS[cfg.command](cfg)
    summary = {"command": cfg.command, "params": cfg.params, "seed": cfg.seed, **summary}
    if cfg.out_dir:
        files = {"summary.json": json_text(summary)}
        if name:
            files[name] = text
        emit(cfg.out_dir, files, cfg, time.perf_counter() - t0)
        print(json_text(summary), end="")
    else:
        if text:
            sys.stdout.write(text)
            sys.stderr.write(json_text(summary))
        else:
            sys.stdout.write(json_text(summary))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except (UsageError, ConfigError) as e:
        print(f"kummerlab: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except (ConfigError, DomainError, PreconditionError) as e:
        # inputs that parse but fall outside an operation's domain
        print(f"kummerlab: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IdentityViolation as e:
        print(f"kummerlab: invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ArithmeticError, ValueError, MemoryError, RuntimeError, OSError) as e:
        print(f"kummerlab: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
