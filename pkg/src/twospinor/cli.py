"""Command-line entry point: ``twospinor verify | amplitude | benchmark-terms``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .algebra import TOL_COMPOSED, TOL_IDENTITY
from .amplitude import (
    LEGS,
    Couplings,
    ParticleState,
    growth_exponent,
    term_count_scan,
    va_amplitude,
    va_amplitude_reference,
)
from .checks import DEFAULT_SEED, run_verification
from .spinors import EPS, Epsilon
from .trace import METHODS, relative_difference, spin_summed_direct, spin_summed_squared

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2

PROCESS = "nu_n_to_p_e"
FAULTS = {"eps-sign": lambda: Epsilon(upper=-EPS)}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class RunConfig:
    particles: dict
    couplings: Couplings
    tol_identity: float = TOL_IDENTITY
    tol_composed: float = TOL_COMPOSED


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot encode non-finite float {obj}")
        text = format(obj, ".17g")
        # keep floats recognisable as floats after a round trip
        return text if any(ch in text for ch in ".e") else text + ".0"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _number(section: dict, key: str, path: str, default=None) -> float:
    if key not in section:
        if default is None:
            raise ConfigError(f"{path}.{key}", "missing required field")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key}", "must be finite")
    return float(value)


def _sign(section: dict, key: str, path: str) -> int:
    value = section.get(key, 1)
    if isinstance(value, bool) or value not in (1, -1):
        raise ConfigError(f"{path}.{key}", f"expected +1 or -1, got {value!r}")
    return int(value)


def _section(doc: dict, key: str, path: str = "") -> dict:
    where = f"{path}.{key}" if path else key
    if key not in doc:
        raise ConfigError(where, "missing required section")
    if not isinstance(doc[key], dict):
        raise ConfigError(where, "expected an object")
    return doc[key]


def parse_config(doc) -> RunConfig:
    """Validate a decoded JSON document; errors name the offending field path."""
    if not isinstance(doc, dict):
        raise ConfigError("$", "the config must be a JSON object")
    if doc.get("process") != PROCESS:
        raise ConfigError("process", f"expected {PROCESS!r}, got {doc.get('process')!r}")
    particles = _section(doc, "particles")
    states = {}
    for leg in LEGS:
        path = f"particles.{leg}"
        entry = _section(particles, leg, "particles")
        try:
            states[leg] = ParticleState(
                E=_number(entry, "E", path), m=_number(entry, "m", path),
                s=_sign(entry, "s", path), eps=_sign(entry, "eps", path),
                theta=_number(entry, "theta", path, 0.0), phi=_number(entry, "phi", path, 0.0),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(path, str(exc)) from None
    unknown = set(particles) - set(LEGS)
    if unknown:
        raise ConfigError("particles", f"unknown particle(s) {sorted(unknown)}")
    cs = _section(doc, "couplings")
    couplings = Couplings(*(_number(cs, k, "couplings") for k in ("G_F", "g_V", "g_A")))
    tol = doc.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerances", "expected an object")
    t_id = _number(tol, "identity", "tolerances", TOL_IDENTITY)
    t_co = _number(tol, "composed", "tolerances", TOL_COMPOSED)
    for key, value in (("identity", t_id), ("composed", t_co)):
        if value <= 0:
            raise ConfigError(f"tolerances.{key}", "must be positive")
    return RunConfig(states, couplings, t_id, t_co)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(path, f"cannot read config ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(path, f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config(doc)


def amplitude_report(cfg: RunConfig) -> dict:
    legs = [cfg.particles[k] for k in LEGS]
    c = cfg.couplings
    m = va_amplitude(*legs, c)
    ref = va_amplitude_reference(*legs, c)
    sums = {meth: spin_summed_squared(*legs, c, meth).value for meth in METHODS}
    direct_sum = spin_summed_direct(*legs, c)
    scale = max(abs(m), abs(ref))
    return {
        "amplitude": {"re": m.real, "im": m.imag},
        "amplitude_sq": abs(m) ** 2,
        "spin_summed": sums,
        "residuals": {
            "engine_vs_reference": abs(m - ref) / scale if scale > 0 else 0.0,
            "enumeration_vs_trace": relative_difference(sums["enumeration"], sums["trace"]),
            "direct_vs_enumeration": relative_difference(direct_sum, sums["enumeration"]),
        },
    }


def cmd_verify(args) -> int:
    eps = FAULTS[args.inject_fault]() if args.inject_fault else Epsilon()
    results = run_verification(seed=args.seed, eps=eps)
    failed = [r.name for r in results if not r.passed]
    if args.json:
        checks = {r.name: {"residual": r.residual, "tol": r.tol, "passed": r.passed} for r in results}
        print(dumps({"seed": args.seed, "passed": not failed, "checks": checks}))
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            status = "ok" if r.passed else "FAIL"
            print(f"{r.name:<{width}}  {r.residual:.3e}  (tol {r.tol:.0e})  {status}")
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_amplitude(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = amplitude_report(cfg)
    print(dumps(report))
    worst = max(report["residuals"].values())
    if worst > cfg.tol_composed:
        print(f"residual {worst:.3e} exceeds tolerance {cfg.tol_composed:.0e}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_benchmark_terms(args) -> int:
    if args.max_n < 2:
        print("config error: --max-n must be at least 2", file=sys.stderr)
        return EXIT_CONFIG
    rows = term_count_scan(range(2, args.max_n + 1, 2), seed=args.seed)
    print("n,direct_count,trace_count")
    for n, direct, trace in rows:
        print(f"{n},{direct},{trace}")
    if len(rows) >= 2:
        ns = [r[0] for r in rows]
        print(f"# direct_exponent={growth_exponent(ns, [r[1] for r in rows]):.17g}")
        print(f"# trace_exponent={growth_exponent(ns, [r[2] for r in rows]):.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twospinor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--json", action="store_true", help="print a machine-readable residual map")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--inject-fault", choices=sorted(FAULTS), default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("amplitude", help="evaluate M for nu n -> p e from a JSON config")
    p.add_argument("--config", required=True, help="path to the JSON run config")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="accepted for uniformity; the amplitude report is deterministic")
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("benchmark-terms", help="CSV of contraction counts per chain length")
    p.add_argument("--max-n", type=int, required=True, help="largest (even) chain length")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    p.set_defaults(func=cmd_benchmark_terms)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
