"""Command-line front end.

Every subcommand accepts ``--format json|tsv``.  Results go to stdout, errors
to stderr with a non-zero exit status.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .cf import CFSpec, DyadicRational
from .errors import MinkowskiError

ENV_WORKERS = "MINKOWSKI_WORKERS"


def _default_workers() -> int:
    raw = os.environ.get(ENV_WORKERS, "1")
    try:
        value = int(raw)
    except ValueError:
        raise SystemExit(f"error: {ENV_WORKERS} must be an integer, got {raw!r}") from None
    return max(1, value)


def parse_point(text: str) -> Fraction | CFSpec:
    """``p/q``, ``0`` or ``1`` give a rational; anything else is read as a
    continued-fraction spec such as ``"2,2"`` or ``";tail=const:1"``."""
    text = text.strip()
    if "/" in text or text in ("0", "1"):
        return Fraction(text)
    return CFSpec.parse(text)


# ---------------------------------------------------------------------------
# output helpers


def _emit(args, payload: dict, rows: list[Sequence] | None = None, header: Sequence[str] | None = None) -> None:
    out = sys.stdout
    if args.format == "json":
        json.dump(payload, out, indent=2, sort_keys=False, default=_json_default)
        out.write("\n")
        return
    if rows is None:
        rows = [(k, _tsv_value(v)) for k, v in payload.items()]
        header = header or ("key", "value")
    if header:
        out.write("\t".join(header) + "\n")
    for row in rows:
        out.write("\t".join(_tsv_value(v) for v in row) + "\n")


def _json_default(obj):
    if isinstance(obj, (Fraction, DyadicRational, CFSpec)):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _tsv_value(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))
    if isinstance(v, (list, tuple)):
        return ",".join(_tsv_value(x) for x in v) if v else "-"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True, default=_json_default)
    if v is None:
        return "-"
    return str(v)


# ---------------------------------------------------------------------------
# subcommands


def cmd_q(args) -> int:
    from .question import q_enclose, q_eval, q_inverse

    if args.action == "eval":
        x = parse_point(args.value)
        if isinstance(x, CFSpec) and x.is_rational:
            x = x.value()
        if isinstance(x, CFSpec) or args.enclose is not None:
            level = args.enclose if args.enclose is not None else 64
            enc = q_enclose(x, level)
            _emit(args, {"x": str(x), "level": level, "lower": str(enc.lower), "upper": str(enc.upper)})
        else:
            y = q_eval(x)
            if args.format == "json":
                _emit(args, {"x": str(x), "Q": str(y)})
            else:
                sys.stdout.write(f"{y}\n")
        return 0
    y = DyadicRational.parse(args.value)
    x = q_inverse(y)
    if args.format == "json":
        _emit(args, {"y": str(y), "x": str(x)})
    else:
        sys.stdout.write(f"{x}\n")
    return 0


def cmd_sb(args) -> int:
    from .sternbrocot import locate, sb_sequence

    if args.action == "tree":
        seq = sb_sequence(args.depth, cap=args.cap)
        rows = [(args.depth, k, x.numerator, x.denominator) for k, x in enumerate(seq)]
        if args.format == "json":
            _emit(args, {"level": args.depth, "points": [[r[2], r[3]] for r in rows]})
        else:
            _emit(args, {}, rows, ("n", "k", "s_nk", "t_nk"))
        return 0
    if args.x is None or args.level is None:
        raise MinkowskiError("sb locate needs --x and --level")
    iv = locate(parse_point(args.x), args.level)
    _emit(
        args,
        {"level": iv.level, "index": iv.index, "left": str(iv.left), "right": str(iv.right)},
    )
    return 0


def cmd_dyn(args) -> int:
    from .dynamics import orbit

    x = parse_point(args.x)
    if args.map == "tent" and not isinstance(x, CFSpec):
        x = Fraction(x)
    orb = orbit(args.map, x, args.steps)
    rows = [(i, p) for i, p in enumerate(orb.points)]
    if args.format == "json":
        _emit(args, {"map": args.map, "points": [str(p) for p in orb.points]})
    else:
        _emit(args, {}, rows, ("step", "value"))
    return 0


def cmd_pressure(args) -> int:
    from .multifractal import pressure

    est = pressure(args.t, args.depth, workers=args.workers)
    payload = est.as_dict()
    if args.format == "json":
        _emit(args, payload)
    else:
        rows = [(n, L) for n, L in zip(est.levels, est.ladder)]
        rows.append(("P", est.value))
        rows.append(("error", est.error))
        _emit(args, {}, rows, ("level", "L_n"))
    return 0


def cmd_spectrum(args) -> int:
    from .multifractal import constants, pressure, spectrum_table

    if args.samples < 2:
        raise MinkowskiError("--samples must be >= 2")
    top = constants().two_log_golden
    grid = [top * i / (args.samples - 1) for i in range(args.samples)]
    table = spectrum_table(grid, depth=args.depth, t_min=args.tmin)
    rows = []
    for p in table:
        p_at = pressure(p.t_star, args.depth).value if math.isfinite(p.t_star) else float("nan")
        rows.append((p.s, p.t_star, p_at, p.d, list(p.flags)))
    if args.format == "json":
        _emit(args, {"depth": args.depth, "points": [dict(zip(("s", "t_star", "P", "d", "flags"), r)) for r in rows]})
    else:
        _emit(args, {}, rows, ("s", "t_star", "P(t_star)", "d", "flags"))
    return 0


def cmd_integrals(args) -> int:
    from .measures import integrals

    res = integrals(args.depth, args.workers)
    if args.format == "json":
        _emit(args, res)
    else:
        flat = {k: v for k, v in res.items() if k != "error_bounds"}
        flat.update({f"error_bound.{k}": v for k, v in res["error_bounds"].items()})
        _emit(args, flat)
    return 0


def cmd_classify(args) -> int:
    from .classify import classify, witness

    if args.action == "witness":
        spec = witness(args.kind)
        if args.format == "json":
            _emit(args, {"class": args.kind, "cf": str(spec)})
        else:
            sys.stdout.write(f"{spec}\n")
        return 0
    if not args.cf:
        raise MinkowskiError("classify needs --cf SPEC")
    report = classify(CFSpec.parse(args.cf), args.horizon, margin=args.margin, tail=args.tail)
    payload = report.as_dict(include_series=args.series)
    if args.format == "json":
        _emit(args, payload)
    else:
        _emit(args, {k: v for k, v in payload.items() if k != "diagnostics"})
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES, run_all, run_suite

    if args.inject_fault and args.inject_fault not in SUITES:
        raise MinkowskiError(f"unknown suite {args.inject_fault!r}")
    if args.suite:
        size = args.qmax if args.suite == "conjugacy" else None
        results = [run_suite(args.suite, size, args.inject_fault == args.suite)]
    else:
        results = run_all({"conjugacy": args.qmax}, args.inject_fault)
    failed = [r.name for r in results if not r.passed]
    payload = {"passed": not failed, "failed": failed, "suites": [r.as_dict() for r in results]}
    if args.format == "json":
        _emit(args, payload)
    else:
        rows = [(r.name, "pass" if r.passed else "FAIL", r.checked, round(r.seconds, 3)) for r in results]
        _emit(args, {}, rows, ("suite", "status", "checked", "seconds"))
    if failed:
        sys.stderr.write(f"verify: failing suite(s): {', '.join(failed)}\n")
        return 1
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="tsv", help="output format")
    common.add_argument(
        "--workers", type=int, default=None, help=f"worker threads (default: ${ENV_WORKERS} or 1)"
    )

    parser = argparse.ArgumentParser(
        prog="minkowski",
        description="Minkowski's question mark function, Stern-Brocot structures and multifractal analysis.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("q", parents=[common], help="evaluate or invert Q")
    q.add_argument("action", choices=("eval", "inv"))
    q.add_argument("value", help="p/q, a CF spec, or (for inv) a dyadic m/2^e")
    q.add_argument("--enclose", type=int, default=None, metavar="N", help="dyadic enclosure at level N")
    q.set_defaults(func=cmd_q)

    sb = sub.add_parser("sb", parents=[common], help="Stern-Brocot sequences")
    sb.add_argument("action", choices=("tree", "locate"))
    sb.add_argument("--depth", type=int, default=3)
    sb.add_argument("--cap", type=int, default=20, help="largest level sb tree will list")
    sb.add_argument("--x", default=None)
    sb.add_argument("--level", type=int, default=None)
    sb.set_defaults(func=cmd_sb)

    dyn = sub.add_parser("dyn", parents=[common], help="orbits of the interval maps")
    dyn.add_argument("action", choices=("orbit",))
    dyn.add_argument("--map", choices=("farey", "tent", "gauss"), default="farey")
    dyn.add_argument("--x", required=True)
    dyn.add_argument("--steps", type=int, default=10)
    dyn.set_defaults(func=cmd_dyn)

    pr = sub.add_parser("pressure", parents=[common], help="Stern-Brocot pressure estimate")
    pr.add_argument("--t", type=float, required=True)
    pr.add_argument("--depth", type=int, default=22)
    pr.set_defaults(func=cmd_pressure)

    sp = sub.add_parser("spectrum", parents=[common], help="dimension spectrum d(s)")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--depth", type=int, default=22)
    sp.add_argument("--tmin", type=float, default=-40.0)
    sp.set_defaults(func=cmd_spectrum)

    for name in ("integrals",):
        ig = sub.add_parser(name, parents=[common], help="expectations, Lyapunov exponent, dimension")
        ig.add_argument("--depth", type=int, default=22)
        ig.set_defaults(func=cmd_integrals)
    me = sub.add_parser("measures", parents=[common], help="alias group for integrals")
    me.add_argument("action", choices=("integrals",))
    me.add_argument("--depth", type=int, default=22)
    me.set_defaults(func=cmd_integrals)

    cl = sub.add_parser("classify", parents=[common], help="classify a point or emit a witness")
    cl.add_argument("action", nargs="?", choices=("witness",), default=None)
    cl.add_argument("--cf", default=None, help="CF spec of the point")
    cl.add_argument("--horizon", type=int, default=10_000)
    cl.add_argument("--margin", type=float, default=0.05)
    cl.add_argument("--tail", type=float, default=0.25)
    cl.add_argument("--series", action="store_true", help="include the full diagnostic series")
    cl.add_argument("--class", dest="kind", choices=("tilde", "inf", "zero"), default="tilde")
    cl.set_defaults(func=cmd_classify)

    ve = sub.add_parser("verify", parents=[common], help="run the self-check suites")
    ve.add_argument("--suite", default=None)
    ve.add_argument("--qmax", type=int, default=500)
    ve.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    ve.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers is None:
        args.workers = _default_workers()
    if args.workers < 1:
        sys.stderr.write("error: --workers must be >= 1\n")
        return 2
    try:
        return args.func(args)
    except (MinkowskiError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
