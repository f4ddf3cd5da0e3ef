"""Command-line interface: ``qgevrey <subcommand> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage/spec/IO error,
3 numeric nonconvergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction
from pathlib import Path

from .exact import parse_rational
from .gevrey import InsufficientData, borel, borel_radius, gevrey_fit, log_abs
from .habiro import nicely_bounded_check
from .resum import DegenerateSeries, NonconvergentQuadrature, PoleOnRay, pade, poles, resum_series
from .series import coeffs_to_csv, decimal_approx
from .specs import SeriesSpec, SpecError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3
DEFAULT_ORDER = 40


class UsageError(Exception):
    pass


# -- deterministic serialization ----------------------------------------------


def _json_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return {True: "true", False: "false", None: "null"}[v]
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return '"nan"'
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        return "%.17g" % v
    if isinstance(v, complex):
        return _json_value({"re": v.real, "im": v.imag})
    if isinstance(v, Fraction):
        return _json_value(str(v))
    if isinstance(v, str):
        import json

        return json.dumps(v)
    if isinstance(v, dict):
        items = sorted((str(k), val) for k, val in v.items())
        return "{" + ", ".join(f"{_json_value(k)}: {_json_value(val)}" for k, val in items) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(obj) -> str:
    """JSON with sorted keys and every float printed as ``%.17g``."""
    return _json_value(obj) + "\n"


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["%.17g" % c if isinstance(c, float) else c for c in row])
    return buf.getvalue()


# -- gnuplot emission ---------------------------------------------------------


def _write_plot(prefix: str, rows, xlabel: str, ylabel: str, title: str) -> None:
    dat = Path(prefix + ".dat")
    gp = Path(prefix + ".gp")
    dat.parent.mkdir(parents=True, exist_ok=True)
    dat.write_text("".join(" ".join("%.17g" % v for v in r) + "\n" for r in rows))
    style = "points pt 7" if title == "poles" else "linespoints"
    gp.write_text(
        f"set xlabel '{xlabel}'\nset ylabel '{ylabel}'\nset title '{title}'\n"
        f"plot '{dat.name}' using 1:2 with {style} notitle\n"
    )


# -- subcommands --------------------------------------------------------------


def _load_spec(args) -> SeriesSpec:
    if args.spec and args.builtin:
        raise UsageError("give either --spec or --builtin, not both")
    if args.spec:
        spec = SeriesSpec.from_file(args.spec)
    elif args.builtin:
        spec = SeriesSpec.from_builtin(args.builtin)
    else:
        raise UsageError("a series is required: --spec FILE or --builtin NAME")
    if args.normalize_exp is not None:
        spec = spec.with_normalization(args.normalize_exp)
    return spec


def _series(args):
    spec = _load_spec(args)
    if args.order < 0:
        raise UsageError("--order must be nonnegative")
    return spec, spec.resolve(args.order, args.cache)


def cmd_coeffs(args) -> tuple[int, str]:
    spec, f = _series(args)
    if args.plot:
        rows = [(n, log_abs(c)) for n, c in enumerate(f.coeffs) if c]
        _write_plot(args.plot, rows, "n", "log|a_n|", "coefficients")
    if args.format == "csv":
        return EXIT_OK, coeffs_to_csv(f.coeffs)
    return EXIT_OK, dumps({
        "spec": spec.data, "order": args.order, "var": f.var,
        "coeffs": [str(Fraction(c)) for c in f.coeffs],
        "decimal_approx": [decimal_approx(c) for c in f.coeffs],
    })


def cmd_gevrey(args) -> tuple[int, str]:
    _, f = _series(args)
    rep = gevrey_fit(f.coeffs, skip=args.skip)
    d = rep.to_json()
    if args.format == "csv":
        keys = sorted(d)
        return EXIT_OK, _csv(keys, [[d[k] for k in keys]])
    return EXIT_OK, dumps(d)


def cmd_borel(args) -> tuple[int, str]:
    _, f = _series(args)
    g, a0 = borel(f)
    if args.plot:
        rows = [(n, log_abs(c)) for n, c in enumerate(g.coeffs) if c]
        _write_plot(args.plot, rows, "n", "log|g_n|", "borel")
    if args.format == "csv":
        return EXIT_OK, coeffs_to_csv(g.coeffs)
    try:
        radius = borel_radius(g)
    except InsufficientData:
        radius = None
    return EXIT_OK, dumps({
        "a0": str(Fraction(a0)), "var": g.var,
        "coeffs": [str(Fraction(c)) for c in g.coeffs],
        "radius_estimate": radius,
    })


def _pade_of(args):
    _, f = _series(args)
    g, a0 = borel(f)
    m = args.m if args.m is not None else (len(g.coeffs) - 1) // 2
    return pade(g, m), m


def cmd_pade(args) -> tuple[int, str]:
    rf, m = _pade_of(args)
    if args.format == "csv":
        k_max = max(rf.deg_num, rf.deg_den)
        rows = [
            [k, str(rf.num[k]) if k <= rf.deg_num else "0", str(rf.den[k]) if k <= rf.deg_den else "0"]
            for k in range(k_max + 1)
        ]
        return EXIT_OK, _csv(["k", "num", "den"], rows)
    d = rf.to_json()
    d["m"] = m
    return EXIT_OK, dumps(d)


def cmd_poles(args) -> tuple[int, str]:
    rf, _ = _pade_of(args)
    ps = poles(rf)
    if args.plot:
        _write_plot(args.plot, [(z.real, z.imag) for z in ps.poles], "Re p", "Im p", "poles")
    if args.format == "csv":
        return EXIT_OK, ps.to_csv()
    return EXIT_OK, dumps(ps.to_json())


def cmd_resum(args) -> tuple[int, str]:
    if args.x is None:
        raise UsageError("resum needs --x")
    _, f = _series(args)
    deg = args.theta_deg if args.theta_deg is not None else (10.0 if args.median else 0.0)
    r = resum_series(f, args.x, m=args.m, theta=math.radians(deg), median=args.median)
    d = r.to_json()
    d["m"] = r.details.get("m")
    if args.format == "csv":
        return EXIT_OK, _csv(["re", "im", "ray_angle", "error_estimate"],
                             [[r.value.real, r.value.imag, r.ray_angle, r.error_estimate]])
    return EXIT_OK, dumps(d)


def cmd_bounds(args) -> tuple[int, str]:
    spec = _load_spec(args)
    try:
        phi = spec.element()
    except SpecError as exc:
        raise UsageError(f"bounds needs a Habiro element: {exc}") from None
    rep = nicely_bounded_check(phi, args.n_max, parse_rational(args.cprime), args.c)
    d = rep.to_json()
    code = EXIT_OK if rep.passed else EXIT_FAIL
    if args.format == "csv":
        keys = sorted(d)
        return code, _csv(keys, [[d[k] for k in keys]])
    return code, dumps(d)


def cmd_verify(args) -> tuple[int, str]:
    from .verify import CHECKS, run_checks

    names = args.checks or ["all"]
    try:
        results = run_checks(names)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]}; available: {', '.join(CHECKS)}") from None
    ok = all(r.passed for r in results)
    if args.format == "csv":
        text = _csv(["criterion", "name", "pass"], [[r.criterion, r.name, r.passed] for r in results])
    else:
        text = dumps({"pass": ok, "checks": [r.to_json() for r in results]})
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} [{r.criterion}] {r.name}", file=sys.stderr)
    return (EXIT_OK if ok else EXIT_FAIL), text


# -- argument parsing ---------------------------------------------------------


def _rational_arg(text: str) -> str:
    try:
        parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgevrey", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    series = argparse.ArgumentParser(add_help=False)
    series.add_argument("--spec", metavar="FILE", help="JSON series specification")
    series.add_argument("--builtin", metavar="NAME",
                        help="trefoil, fig8, habiro_one, euler, euler-alternating or geometric(r)")
    series.add_argument("--order", type=int, default=DEFAULT_ORDER, metavar="N")
    series.add_argument("--normalize-exp", type=_rational_arg, metavar="r",
                        help="multiply the series by e^{r/x}")
    series.add_argument("--cache", metavar="DIR", help="cache coefficient tables here")

    plot = argparse.ArgumentParser(add_help=False)
    plot.add_argument("--plot", metavar="PREFIX", help="also write PREFIX.dat and PREFIX.gp")

    def add(name, func, parents, help_text):
        p = sub.add_parser(name, parents=parents, help=help_text)
        p.set_defaults(func=func)
        return p

    add("coeffs", cmd_coeffs, [series, common, plot], "exact series coefficients")
    p = add("gevrey", cmd_gevrey, [series, common], "Gevrey order and constant fit")
    p.add_argument("--skip", type=int, default=10, help="ignore coefficients below this index")
    add("borel", cmd_borel, [series, common, plot], "Borel transform coefficients")
    p = add("pade", cmd_pade, [series, common], "[m/m] Pade approximant of the Borel transform")
    p.add_argument("--m", type=int, metavar="M")
    p = add("poles", cmd_poles, [series, common, plot], "poles of the Pade approximant")
    p.add_argument("--m", type=int, metavar="M")
    p = add("resum", cmd_resum, [series, common], "Borel-Pade-Laplace sum at x")
    p.add_argument("--m", type=int, metavar="M")
    p.add_argument("--x", type=float, metavar="VAL")
    p.add_argument("--theta-deg", type=float, metavar="D")
    p.add_argument("--median", action="store_true", help="average the rays at +theta and -theta")
    p = add("bounds", cmd_bounds, [series, common], "nicely-bounded diagnostic of a Habiro element")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--cprime", type=_rational_arg, default="1", help="span threshold C'")
    p.add_argument("--c", type=float, default=2.0, help="l1-norm growth threshold C")
    p = add("verify", cmd_verify, [common], "run the built-in verification suite")
    p.add_argument("checks", nargs="*", metavar="CHECK", help="check names, or 'all' (default)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except (UsageError, SpecError, InsufficientData, DegenerateSeries, PoleOnRay) as exc:
        print(f"qgevrey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonconvergentQuadrature as exc:
        print(f"qgevrey: nonconvergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"qgevrey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"qgevrey: error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
