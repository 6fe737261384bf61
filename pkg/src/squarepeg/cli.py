"""Command line interface.

Exit codes::

    0  success
    2  usage error (bad flags)
    3  curve file could not be parsed
    4  path budget exceeded
    5  solver failure
    6  input/output error
    7  argument out of range
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import polytope
from .homotopy import HomotopySettings
from .poly import CurveF, CurveFormatError, format_curve, parse_curve
from .polytope import LAMBDA_NAMES
from .render import RenderSpec, curve_sample_points, render_svg
from .solver import (DEFAULT_BUDGET, BudgetExceeded, SolverError, SquareReport,
                     count_inscribed_squares, reality_and_render_data)
from .squares import rewritten_generators

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_BUDGET = 4
EXIT_SOLVER = 5
EXIT_IO = 6
EXIT_RANGE = 7

MAX_BOUND_DEGREE = 50


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _read_curve(path: str) -> CurveF:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    try:
        return parse_curve(text)
    except (CurveFormatError, ValueError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from exc


def _check_degree(m: int, lo: int = 1) -> None:
    if not lo <= m <= MAX_BOUND_DEGREE:
        raise CliError(f"degree must be in {lo}..{MAX_BOUND_DEGREE}", EXIT_RANGE)


def bound_line(m: int) -> str:
    return f"MV={polytope.mixed_volume(m)} bound={polytope.inscribed_bound(m)} bezout={polytope.bezout_number(m)}"


def cmd_bound(args) -> int:
    _check_degree(args.m)
    m = args.m
    data = {"m": m, "mixed_volume": polytope.mixed_volume(m),
            "bound": polytope.inscribed_bound(m), "bezout": polytope.bezout_number(m)}
    _emit(args, bound_line(m), data)
    return EXIT_OK


def cmd_mixed_volume(args) -> int:
    _check_degree(args.m)
    m = args.m
    mv = polytope.mixed_volume(m)
    data = {"m": m, "mixed_volume": mv}
    lines = []
    if m >= 4:
        mp = polytope.minkowski_params(m)
        vol = polytope.minkowski_volume_poly(m)
        shapes = [str(P) for P in polytope.newton_polytopes(m)]
        data.update({
            "newton_polytopes": shapes,
            "m_prime": mp.m_prime.format(LAMBDA_NAMES),
            "l_prime": mp.l_prime.format(LAMBDA_NAMES),
            "k_prime": mp.k_prime.format(LAMBDA_NAMES),
            "volume_polynomial": vol.format(LAMBDA_NAMES),
        })
        lines += [f"N(g1..g4) = {', '.join(shapes)}",
                  f"m' = {data['m_prime']}", f"l' = {data['l_prime']}", f"k' = {data['k_prime']}",
                  f"Vol = {data['volume_polynomial']}"]
        data["source"] = "coefficient of l1*l2*l3*l4"
    else:
        data["source"] = "closed form m^4 - 5m^2 + 4m (polytopes not full-dimensional)"
    lines.append(f"MV={mv} ({data['source']})")
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def cmd_generators(args) -> int:
    f = _read_curve(args.curve)
    system = rewritten_generators(f)
    data = {f"g{i + 1}": g.format() for i, g in enumerate(system.g)}
    text = "\n".join(f"g{i + 1} = {g.format()}" for i, g in enumerate(system.g))
    _emit(args, text, data)
    return EXIT_OK


def cmd_newton_check(args) -> int:
    f = _read_curve(args.curve)
    m = f.degree
    system = rewritten_generators(f)
    rows = []
    for i, g in enumerate(system.g, 1):
        if m < 4:
            rows.append({"generator": f"g{i}", "shape": None, "result": "SKIP"})
            continue
        P = polytope.shape_of_generator(i, m)
        ok = polytope.newton_matches(g, P)
        rows.append({"generator": f"g{i}", "shape": str(P), "result": "PASS" if ok else "FAIL"})
    if m < 4:
        text = f"degree {m} < 4: the Newton polytopes are not full-dimensional; nothing to check"
    else:
        text = "\n".join(f"{r['generator']}: N = {r['shape']} {r['result']}" for r in rows)
    _emit(args, text, {"degree": m, "checks": rows})
    return EXIT_OK


def _settings(args) -> HomotopySettings:
    return HomotopySettings(seed=args.seed)


def _solve(args, f: CurveF, rotate: bool) -> SquareReport:
    try:
        return count_inscribed_squares(f, _settings(args), rotate=rotate, budget=args.budget)
    except BudgetExceeded as exc:
        raise CliError(str(exc), EXIT_BUDGET) from exc
    except SolverError as exc:
        raise CliError(str(exc), EXIT_SOLVER) from exc


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def format_report(report: SquareReport) -> str:
    lines = [
        f"degree {report.degree}: {report.n_paths} paths "
        f"({report.n_regular} regular, {report.n_singular} singular, "
        f"{report.n_diverged} diverged, {report.n_failed} failed)",
        f"{_plural(report.n_nondegenerate, 'solution')}, {_plural(report.n_orbits, 'square')}, "
        f"{_plural(report.n_real_squares, 'real square')}",
    ]
    for s in report.real_squares:
        # roundoff below 1e-12 is shown as 0
        a, b, c, d = (v if abs(v) > 1e-12 else 0.0 for v in (complex(v).real for v in s.param))
        lines.append(f"  center ({a:.10g}, {b:.10g})  offset ({c:.10g}, {d:.10g})")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def report_payload(f: CurveF, report: SquareReport) -> dict:
    d = report.to_dict()
    d["curve"] = format_curve(f).splitlines()
    return d


def cmd_solve(args) -> int:
    f = _read_curve(args.curve)
    report = _solve(args, f, rotate=not args.no_rotate)
    _emit(args, format_report(report), report_payload(f, report))
    return EXIT_OK


def _parse_range(text: str | None):
    if text is None:
        return None
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise CliError(f"bad range {text!r}, expected a:b", EXIT_USAGE) from exc
    if not lo < hi:
        raise CliError(f"empty range {text!r}", EXIT_RANGE)
    return (lo, hi)


def cmd_plot(args) -> int:
    if args.report:
        try:
            payload = json.loads(Path(args.report).read_text())
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read report {args.report}: {exc}", EXIT_IO) from exc
        try:
            f = parse_curve("\n".join(payload["curve"]))
        except (KeyError, CurveFormatError) as exc:
            raise CliError(f"report has no usable curve: {exc}", EXIT_PARSE) from exc
        report = SquareReport.from_dict(payload)
    else:
        if args.curve is None:
            raise CliError("plot needs a curve file or --report", EXIT_USAGE)
        f = _read_curve(args.curve)
        report = _solve(args, f, rotate=args.rotate)
    try:
        spec = RenderSpec(xrange=_parse_range(args.xrange), yrange=_parse_range(args.yrange),
                          grid=args.grid)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_RANGE) from exc
    squares = [pts for pts, _ in reality_and_render_data(report)]
    points = None
    if spec.xrange is None or spec.yrange is None:
        points = curve_sample_points(f, seed=args.seed)
    caption = f"{f} inscribing {_plural(len(squares), 'square')}."
    try:
        svg = render_svg(f, squares, spec, caption=caption, curve_points=points)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_RANGE) from exc
    out = args.out or (str(Path(args.curve).with_suffix(".svg")) if args.curve else "squares.svg")
    try:
        Path(out).write_text(svg)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_IO) from exc
    _emit(args, format_report(report) + f"\nwrote {out}",
          {**report_payload(f, report), "svg": out})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="random seed for gamma, chart and rotation (default 0)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")

    parser = argparse.ArgumentParser(prog="squarepeg", parents=[common],
                                     description="Squares inscribed on algebraic plane curves.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="mixed volume and square bound for degree m")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("mixed-volume", parents=[common], help="Minkowski volume polynomial and mixed volume")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_mixed_volume)

    p = sub.add_parser("generators", parents=[common], help="print g1..g4 for a curve file")
    p.add_argument("curve")
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("newton-check", parents=[common], help="check Newton polytopes of g1..g4")
    p.add_argument("curve")
    p.set_defaults(func=cmd_newton_check)

    p = sub.add_parser("solve", parents=[common], help="count the squares inscribed on a curve")
    p.add_argument("curve")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help=f"maximum number of homotopy paths (default {DEFAULT_BUDGET})")
    p.add_argument("--no-rotate", action="store_true",
                   help="skip the random rotation/translation of the curve")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("plot", parents=[common], help="render the curve and its real squares as SVG")
    p.add_argument("curve", nargs="?")
    p.add_argument("--report", help="render a saved `solve --json` report instead of solving")
    p.add_argument("--out", help="output SVG path (default: curve file with .svg suffix)")
    p.add_argument("--grid", type=int, default=200, help="marching squares resolution (default 200)")
    p.add_argument("--xrange", help="x viewport a:b (use --xrange=-2:2 for negative bounds)")
    p.add_argument("--yrange", help="y viewport a:b")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--rotate", action="store_true",
                   help="apply the random rotation before solving (off by default for plots)")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "seed"):
        args.seed = 0
    if not hasattr(args, "json"):
        args.json = False
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
