"""Command line front end.

Every subcommand builds a plain dict report; ``--format json`` prints it
with sorted keys so identical invocations give identical bytes.
Exit codes: 0 success, 1 input error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import fixtures
from .algebra.points import ProjPointQ
from .dynamics import (
    AlgebraicSet,
    RationalMap,
    bad_primes,
    decide_preperiodic_rational,
    height_constants,
    preperiodicity_set,
)
from .errors import ArithDynError
from .fatou import totally_fatou_report
from .green import gamma_total, s_integral_test
from .heights import canonical_height_limit, canonical_height_local, weil_height_point
from .places import ARCH, Place
from .preperiodic import algebraic_integer_filter, enumerate_preperiodic_sets, equidistribution_trend

PRECISION_ENV = "ARITHDYN_PRECISION"
MIN_PRECISION = 64
FALLBACK_PRECISION = 128

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Resolved options shared by all subcommands.

    ``source`` is ("fixture", name), ("inline", (num, den)) or ("file", path).
    ``S`` holds primes only; the archimedean place is always a member.
    """

    source: tuple
    precision: int
    tol: float
    S: tuple[int, ...] = ()
    fmt: str = "json"

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError(f"tolerance must be positive, got {self.tol}")
        if self.precision < MIN_PRECISION:
            raise InputError(f"precision must be at least {MIN_PRECISION} bits, got {self.precision}")

    @property
    def places(self) -> list[Place]:
        return [ARCH] + [Place(p) for p in self.S]


@dataclass
class CommandResult:
    code: int
    report: dict = field(default_factory=dict)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.report, sort_keys=True, indent=2)
        return "\n".join(_text_lines(self.report, 0))


def _text_lines(obj, depth):
    pad = "  " * depth
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                yield f"{pad}{k}:"
                yield from _text_lines(v, depth + 1)
            else:
                yield f"{pad}{k}: {_scalar(v)}"
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat_list(item):
                yield f"{pad}-"
                yield from _text_lines(item, depth + 1)
            else:
                yield f"{pad}- {_scalar(item)}"
    else:
        yield pad + _scalar(obj)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, dict):
        return "{}"
    return str(v)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for failed checks here
    def error(self, message):
        raise InputError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in str(text).replace(" ", "").strip("[]").split(",") if t != ""]
    except ValueError:
        raise InputError(f"not a comma separated integer list: {text!r}") from None


def _read_map_file(path: str) -> tuple[list[int], list[int]]:
    """JSON {"num": [...], "den": [...]} or lines ``num: 1,0,0`` / ``den: 1,4,1``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read map file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition(":") if ":" in line else line.partition("=")
            if not sep:
                raise InputError(f"cannot parse map file line: {line!r}")
            data[key.strip().lower()] = val.strip()
    if not isinstance(data, dict) or "num" not in data or "den" not in data:
        raise InputError("map file needs 'num' and 'den' entries")

    def coerce(v):
        if isinstance(v, list):
            try:
                return [int(x) for x in v]
            except (TypeError, ValueError):
                raise InputError(f"non-integer coefficient in {v!r}") from None
        return _int_list(v)

    return coerce(data["num"]), coerce(data["den"])


def load_map(source: tuple) -> RationalMap:
    kind, value = source
    if kind == "fixture":
        try:
            return fixtures.get(value)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    if kind == "inline":
        num, den = value
    else:
        num, den = _read_map_file(value)
    return RationalMap.from_affine(num, den)


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return FALLBACK_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None


def _parse_S(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    primes = set()
    for t in text.split(","):
        t = t.strip()
        if not t:
            continue
        pl = Place.parse(t)
        if pl.p is not None:
            primes.add(pl.p)
    return tuple(sorted(primes))


def _point(text: str | None, required: bool = True) -> ProjPointQ | None:
    if text is None:
        if required:
            raise InputError("--point is required")
        return None
    try:
        return ProjPointQ.parse(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse point {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_argument_group("map")
    src.add_argument("--fixture", choices=fixtures.names())
    src.add_argument("--num", help="numerator coefficients, descending powers of z")
    src.add_argument("--den", help="denominator coefficients, descending powers of z")
    src.add_argument("--map-file", help="JSON or key: value file with num and den")
    common.add_argument("--precision", type=int, default=None,
                        help=f"working bits (default ${PRECISION_ENV} or {FALLBACK_PRECISION})")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--S", dest="S", default="", help="comma separated primes; infinity is implicit")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = _Parser(prog="arithdyn", description="Heights, Green pairings and Fatou certificates over Q.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("analyze", parents=[common], help="degree, resultant, bad primes, height constants")

    p = sub.add_parser("height", parents=[common], help="canonical height by both routes")
    p.add_argument("--point", required=True)

    p = sub.add_parser("preperiodic", parents=[common], help="catalog of disjoint preperiodic sets")
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--point", help="also decide whether this rational point is preperiodic")

    for name, helptext in (("gamma", "Green pairing sum over all places"),
                           ("verify-identity", "compare Gamma with the canonical height")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--point", required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--n", type=int, default=0)

    p = sub.add_parser("s-integral", parents=[common], help="S-integrality of preperiodic sets against a point")
    p.add_argument("--point", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--max-m", type=int, help="test every catalog entry up to this m")

    p = sub.add_parser("fatou", parents=[common], help="per-place Fatou certificates")
    p.add_argument("--point", required=True)
    p.add_argument("--prime-budget", type=int, default=50)
    p.add_argument("--budget", type=int, default=200, help="orbit steps allowed before landing")

    p = sub.add_parser("equidist-trend", parents=[common], help="truncated Green averages over growing catalogs")
    p.add_argument("--point", required=True)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--M", dest="M", type=float, default=10.0)
    return parser


def _config(args) -> RunConfig:
    chosen = [k for k in ("fixture", "num", "map_file") if getattr(args, k) is not None]
    if args.den is not None and args.num is None:
        raise InputError("--den needs --num")
    if len(chosen) != 1:
        raise InputError("give exactly one of --fixture, --num/--den, --map-file")
    if args.fixture is not None:
        source = ("fixture", args.fixture)
    elif args.num is not None:
        source = ("inline", (_int_list(args.num), _int_list(args.den if args.den is not None else "1")))
    else:
        source = ("file", args.map_file)
    prec = args.precision if args.precision is not None else _default_precision()
    return RunConfig(source, prec, args.tol, _parse_S(args.S), args.format)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _map_report(phi: RationalMap) -> dict:
    return {"map": str(phi), "F": phi.F.to_json(), "G": phi.G.to_json(), "degree": phi.degree}


def cmd_analyze(phi, cfg, args) -> CommandResult:
    hc = height_constants(phi)
    fixed = preperiodicity_set(phi, 1, 0)
    rep = _map_report(phi)
    rep.update({
        "resultant": phi.resultant,
        "bad_primes": bad_primes(phi),
        "height_constants": {
            "global_bound": repr(hc.global_bound),
            "arch_bound": repr(hc.arch_bound),
        },
        "fixed_points": {
            "form": fixed.form.to_json(),
            "count": fixed.size,
            "rational": [str(P) for P in fixed.rational_points()],
        },
    })
    return CommandResult(EXIT_OK, rep)


def cmd_height(phi, cfg, args) -> CommandResult:
    P = _point(args.point)
    lim = canonical_height_limit(phi, P, cfg.tol, cfg.precision)
    loc = canonical_height_local(phi, P, cfg.tol, cfg.precision)
    diff = abs(lim.value - loc.value)
    bound = lim.error_bound + loc.error_bound
    rep = {
        "point": str(P),
        "weil_height": repr(weil_height_point(P)),
        "limit": lim.to_json(),
        "local_sum": loc.to_json(),
        "difference": repr(diff),
        "combined_bound": repr(bound),
        "agree": diff <= bound,
    }
    return CommandResult(EXIT_OK if diff <= bound else EXIT_FAILED, rep)


def cmd_preperiodic(phi, cfg, args) -> CommandResult:
    catalog = enumerate_preperiodic_sets(phi, args.max_m)
    passing, failing = algebraic_integer_filter(catalog)
    rep = {"max_m": args.max_m, "catalog": catalog.to_json(),
           "algebraic_integer": {"passing": [f"({e.m},{e.n})" for e in passing],
                                 "failing": [f"({e.m},{e.n})" for e in failing]}}
    P = _point(args.point, required=False)
    if P is not None:
        rep["orbit"] = decide_preperiodic_rational(phi, P).to_json()
    return CommandResult(EXIT_OK, rep)


def _target_set(phi, P, m, n) -> AlgebraicSet:
    if m is None:
        raise InputError("--m is required")
    if not 0 <= n < m:
        raise InputError(f"need 0 <= n < m, got m={m}, n={n}")
    Z = preperiodicity_set(phi, m, n)
    if Z.contains(P):
        raise InputError(f"{P} lies in the ({m},{n}) preperiodic set; the pairing needs disjoint sets")
    return Z


def cmd_gamma(phi, cfg, args) -> CommandResult:
    P = _point(args.point)
    Z = _target_set(phi, P, args.m, args.n)
    report = gamma_total(phi, Z, AlgebraicSet.point(P), cfg.tol, cfg.precision)
    rep = {"point": str(P), "m": args.m, "n": args.n, "set": Z.to_json(), "gamma": report.to_json()}
    return CommandResult(EXIT_OK, rep)


def cmd_verify_identity(phi, cfg, args) -> CommandResult:
    P = _point(args.point)
    Z = _target_set(phi, P, args.m, args.n)
    orbit = AlgebraicSet.point(P)
    S = sorted(set(cfg.S) | set(bad_primes(phi)))
    gamma = gamma_total(phi, Z, orbit, cfg.tol, cfg.precision)
    h = canonical_height_limit(phi, P, cfg.tol, cfg.precision)
    residual = abs(gamma.total - h.value)
    bound = gamma.error_bound + h.error_bound
    ok = residual <= bound
    verdict = s_integral_test(phi, Z, orbit, S)
    rep = {
        "point": str(P), "m": args.m, "n": args.n,
        "S": ["inf"] + [str(p) for p in S],
        "set": Z.to_json(),
        "gamma": gamma.to_json(),
        "canonical_height": h.to_json(),
        "residual": repr(residual),
        "combined_bound": repr(bound),
        "s_integral": verdict.to_json(),
        "verified": ok,
    }
    return CommandResult(EXIT_OK if ok else EXIT_FAILED, rep)


def cmd_s_integral(phi, cfg, args) -> CommandResult:
    P = _point(args.point)
    orbit = AlgebraicSet.point(P)
    S = ["inf"] + [str(p) for p in cfg.S]
    rows = []
    if args.max_m is not None:
        for e in enumerate_preperiodic_sets(phi, args.max_m).entries:
            if e.points.contains(P):
                rows.append({"m": e.m, "n": e.n, "contains_point": True})
                continue
            rows.append({"m": e.m, "n": e.n, **s_integral_test(phi, e.points, orbit, cfg.places).to_json()})
    else:
        Z = _target_set(phi, P, args.m, args.n)
        rows.append({"m": args.m, "n": args.n, **s_integral_test(phi, Z, orbit, cfg.places).to_json()})
    return CommandResult(EXIT_OK, {"point": str(P), "S": S, "results": rows})


def cmd_fatou(phi, cfg, args) -> CommandResult:
    P = _point(args.point)
    report = totally_fatou_report(phi, P, prime_budget=args.prime_budget, budget=args.budget)
    return CommandResult(EXIT_OK, {"point": str(P), **report.to_json()})


def cmd_equidist_trend(phi, cfg, args) -> CommandResult:
    P = _point(args.point)
    rows = equidistribution_trend(phi, P, args.max_m, args.M, cfg.tol, cfg.precision)
    return CommandResult(EXIT_OK, {"point": str(P), "M": repr(args.M), "rows": [r.to_json() for r in rows]})


COMMANDS = {
    "analyze": cmd_analyze,
    "height": cmd_height,
    "preperiodic": cmd_preperiodic,
    "gamma": cmd_gamma,
    "verify-identity": cmd_verify_identity,
    "s-integral": cmd_s_integral,
    "fatou": cmd_fatou,
    "equidist-trend": cmd_equidist_trend,
}


def run_command(argv: list[str] | None = None) -> tuple[CommandResult, str]:
    """Run one subcommand; returns the result and the output format."""
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        cfg = _config(args)
        phi = load_map(cfg.source)
        return COMMANDS[args.command](phi, cfg, args), fmt
    except (InputError, ArithDynError, ValueError, OverflowError) as exc:
        return CommandResult(EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}), fmt


def main(argv: list[str] | None = None) -> int:
    try:
        result, fmt = run_command(argv)
    except SystemExit as exc:          # --help
        return int(exc.code or 0)
    out = result.render(fmt)
    if result.code == EXIT_INPUT:
        print(f"error: {result.report['error']}: {result.report['message']}", file=sys.stderr)
    print(out)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
