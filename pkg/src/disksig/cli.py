"""Command-line front end: reproducible runs with machine-readable output.

Every subcommand writes one output file (JSON or CSV) plus a sidecar
manifest `<out>.manifest.json` recording the subcommand, full parameter
set, tool version, timestamp, and a digest of the output bytes.  The
output file itself carries no timestamp, so re-running the same command
reproduces it bit for bit; only the manifest differs.

Exit status is 0 only when the run's embedded verification checks all
pass; failed checks are listed on standard error.  Usage errors
(violated caps, malformed flags) exit with status 2 and write nothing.

Rationals cross the boundary as "num/den" strings and balls as
{"mid", "rad"} decimal strings, so no binary float ambiguity enters the
serialized results.  The default working precision is 128 bits,
overridable with the DISKSIG_PREC environment variable or --precision.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .balls import DEFAULT_PREC, RealBall
from .bessel import (bessel_j, d_lambda, d_lambda_determinant,
                     make_constants, numerator_im, series_terms)
from .bessel import abc_closed_form
from .development import fold_apply, partial_sum_F
from .exactpoly import rat_str, words
from .hierarchy import (HierarchyState, a_coefficients, developed_checks,
                        level_norms, radius_estimate, tensor_checks)
from .montecarlo import SimConfig, estimate_expected_sig
from .polefinder import SignChangeError, locate_pole

TENSOR_CAP = 16
DEVELOPED_CAP = 200
_E3 = (Fraction(0), Fraction(0), Fraction(1))


class UsageError(Exception):
    """Violated precondition of a subcommand; nothing is written."""


def _parse_rat(text: str) -> Fraction:
    """Rational from "num/den" or an exact decimal like "2.82" / "1e-6"."""
    try:
        if "/" in text:
            return Fraction(text)
        from decimal import Decimal

        return Fraction(Decimal(text))
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(f"not a rational: {text!r}") from exc


def _default_precision() -> int:
    raw = os.environ.get("DISKSIG_PREC")
    if raw is None:
        return DEFAULT_PREC
    try:
        prec = int(raw)
    except ValueError as exc:
        raise UsageError(f"DISKSIG_PREC must be an integer, got {raw!r}") from exc
    if prec < 53:
        raise UsageError("DISKSIG_PREC must be at least 53")
    return prec


def _check_precision(prec: int) -> int:
    if prec < 53:
        raise UsageError("--precision must be at least 53")
    return prec


def _float_upper(q: Fraction) -> float:
    """Smallest float at or above the rational q (q is read as a bound)."""
    f = float(q)
    while Fraction(f) < q:
        f = math.nextafter(f, math.inf)
    return f


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".disksig-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _manifest_value(value):
    if isinstance(value, Fraction):
        return rat_str(value)
    return value


def _write_manifest(subcommand: str, args: argparse.Namespace,
                    out_path: str, text: str) -> None:
    params = {key: _manifest_value(val) for key, val in sorted(vars(args).items())
              if key not in ("cmd", "out")}
    manifest = {
        "schema": "disksig.manifest/1",
        "subcommand": subcommand,
        "parameters": params,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "output": out_path,
        "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }
    _atomic_write(out_path + ".manifest.json", json.dumps(manifest, indent=2) + "\n")


# -- subcommand bodies: each returns (output text, failed checks) ------


def cmd_hierarchy(args) -> tuple:
    cap = TENSOR_CAP if args.mode == "tensor" else DEVELOPED_CAP
    if not 0 <= args.levels <= cap:
        raise UsageError(f"--levels for mode {args.mode} must be in 0..{cap}")
    state = HierarchyState()
    n_max = args.levels
    a_vals = a_coefficients(state, n_max)
    checks = []
    failures = []
    for n in range(1, n_max + 1):
        res = (tensor_checks if args.mode == "tensor" else developed_checks)(state, n)
        checks.append({"level": n, **res})
        for name, ok in res.items():
            if not ok:
                failures.append(f"level {n}: {name}")
    odd_ok = all(a_vals[n] == 0 for n in range(1, n_max + 1, 2))
    if not odd_ok:
        failures.append("odd-level coefficients not all zero")
    payload = {
        "schema": "disksig.hierarchy/1",
        "mode": args.mode,
        "levels": n_max,
        "a": [rat_str(v) for v in a_vals],
        "checks": checks,
        "odd_levels_vanish": odd_ok,
    }
    if args.mode == "tensor":
        payload["norms"] = [
            {"level": n, "l1": rat_str(norm.l1), "l2sq": rat_str(norm.l2sq)}
            for n in range(n_max + 1)
            for norm in (level_norms(state, n),)
        ]
        fold_ok = True
        for n in range(min(n_max, 8) + 1):
            if fold_apply(state.tensor(n), _E3) != state.developed(n):
                fold_ok = False
                failures.append(f"level {n}: fold of tensor level != developed level")
        payload["fold_matches_developed"] = fold_ok
    if args.dump_polys:
        if args.mode == "tensor":
            payload["polynomials"] = [state.tensor(n).to_json()
                                      for n in range(n_max + 1)]
        else:
            payload["polynomials"] = [
                [comp.to_json() for comp in state.developed(n)]
                for n in range(n_max + 1)
            ]
    return json.dumps(payload, indent=2) + "\n", failures


def cmd_develop(args) -> tuple:
    if not 0 <= args.levels <= DEVELOPED_CAP:
        raise UsageError(f"--levels must be in 0..{DEVELOPED_CAP}")
    x, y = args.x, args.y
    if x * x + y * y > 1:
        raise UsageError("point must lie in the closed unit disk")
    state = HierarchyState()
    levels = [state.developed(n) for n in range(args.levels + 1)]
    per_level = [lv.evaluate(x, y) for lv in levels]
    psum = partial_sum_F(args.lam, (x, y), args.levels, levels)
    failures = []
    checks = {}
    if y == 0:
        checks["axis_second_component_zero"] = all(v[1] == 0 for v in per_level)
    if x * x + y * y == 1:
        checks["boundary_partial_sum_is_e3"] = tuple(psum) == _E3
    fold_ok = True
    for n in range(min(args.levels, 6) + 1):
        if fold_apply(state.tensor(n), _E3).evaluate(x, y) != per_level[n]:
            fold_ok = False
    checks["fold_route_matches"] = fold_ok
    failures.extend(name for name, ok in checks.items() if not ok)
    payload = {
        "schema": "disksig.develop/1",
        "lambda": rat_str(args.lam),
        "point": [rat_str(x), rat_str(y)],
        "levels": args.levels,
        "partial_sum": [rat_str(v) for v in psum],
        "per_level": [[rat_str(c) for c in v] for v in per_level],
        "checks": checks,
    }
    return json.dumps(payload, indent=2) + "\n", failures


def _overlap(a: RealBall, b: RealBall) -> bool:
    return a.lower() <= b.upper() and b.lower() <= a.upper()


def cmd_bessel(args) -> tuple:
    prec = _check_precision(args.precision)
    failures = []
    if args.pairing is not None:
        constants = make_constants(prec)
        lam = args.pairing
        d_direct = d_lambda(lam, constants, prec)
        d_det = d_lambda_determinant(lam, constants, prec)
        num = numerator_im(lam, constants, prec)
        two_route = _overlap(d_direct, d_det)
        if not two_route:
            failures.append("pairing two-route enclosures are disjoint")
        payload = {
            "schema": "disksig.bessel/1",
            "pairing": {
                "lambda": rat_str(lam),
                "d": d_direct.to_json(),
                "d_determinant_route": d_det.to_json(),
                "numerator": num.to_json(),
                "two_route_overlap": two_route,
            },
            "precision": prec,
            "terms": series_terms(lam, constants, prec),
        }
        return json.dumps(payload, indent=2) + "\n", failures
    from .balls import ComplexBall

    point = ComplexBall.from_rationals(args.re, args.im, prec)
    value = bessel_j(args.nu, point, n_terms=args.terms, prec=prec)
    mirrored = bessel_j(args.nu, point.conj(), n_terms=args.terms, prec=prec)
    conj_ok = (_overlap(value.re, mirrored.re)
               and _overlap(value.im, mirrored.im.neg()))
    if not conj_ok:
        failures.append("conjugation symmetry enclosures are disjoint")
    payload = {
        "schema": "disksig.bessel/1",
        "nu": args.nu,
        "point": {"re": rat_str(args.re), "im": rat_str(args.im)},
        "value": value.to_json(),
        "conjugation_symmetry": conj_ok,
        "precision": prec,
        "terms": args.terms,
    }
    return json.dumps(payload, indent=2) + "\n", failures


def cmd_pole(args) -> tuple:
    if args.width <= 0:
        raise UsageError("--width must be positive")
    prec = _check_precision(args.precision)
    certificate = locate_pole(args.width, precision=prec)
    failures = certificate.verify()
    return json.dumps(certificate.to_json(), indent=2) + "\n", failures


def cmd_compare(args) -> tuple:
    if args.lam < 0:
        raise UsageError("--lambda must be nonnegative")
    if not 0 <= args.levels <= DEVELOPED_CAP:
        raise UsageError(f"--levels must be in 0..{DEVELOPED_CAP}")
    prec = _check_precision(args.precision)
    certificate = locate_pole(Fraction(1, 100), precision=prec)
    if args.lam >= certificate.bracket_lo:
        raise UsageError(
            "lambda {} is not below the certified pole bracket [{}, {}]; "
            "the series does not converge there (see the pole subcommand "
            "for the certificate)".format(
                rat_str(args.lam), rat_str(certificate.bracket_lo),
                rat_str(certificate.bracket_hi)))
    state = HierarchyState()
    a_vals = a_coefficients(state, args.levels)
    if args.lam == 0:
        # the ratio defining C has a removable singularity at lambda = 0
        # with limit 1, matching the series' constant term
        closed = RealBall.from_int(1)
    else:
        constants = make_constants(prec)
        closed = abc_closed_form(args.lam, Fraction(0), constants, prec)[2]
    lo_q, hi_q = closed.lower(), closed.upper()
    psum = Fraction(0)
    power = Fraction(1)
    rows = []
    gaps = []
    for k in range(args.levels + 1):
        psum += power * a_vals[k]
        power *= args.lam
        if psum < lo_q:
            gap = lo_q - psum
        elif psum > hi_q:
            gap = psum - hi_q
        else:
            gap = Fraction(0)
        gaps.append(gap)
        rows.append((k, rat_str(psum), repr(_float_upper(gap))))
    failures = []
    if args.levels >= 8 and gaps[-1] > gaps[args.levels // 2]:
        failures.append("partial-sum gap failed to shrink over the second half")
    mid_str, rad_str = closed.decimal_parts()
    buf = io.StringIO()
    buf.write("# schema: disksig.compare/1\n")
    buf.write(f"# lambda: {rat_str(args.lam)}\n")
    buf.write(f"# levels: {args.levels}\n")
    buf.write(f"# precision: {prec}\n")
    buf.write(f"# closed_form_mid: {mid_str}\n")
    buf.write(f"# closed_form_rad: {rad_str}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "partial_sum", "gap"])
    writer.writerows(rows)
    return buf.getvalue(), failures


def cmd_radius(args) -> tuple:
    if not 0 <= args.levels <= DEVELOPED_CAP:
        raise UsageError(f"--levels must be in 0..{DEVELOPED_CAP}")
    state = HierarchyState()
    a_vals = a_coefficients(state, args.levels)
    estimates = radius_estimate(a_vals)
    failures = []
    buf = io.StringIO()
    buf.write("# schema: disksig.radius/1\n")
    buf.write(f"# levels: {args.levels}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "lambda_hat"])
    if not estimates:
        buf.write("# insufficient data: ratio estimates need at least 4 levels\n")
        print("notice: insufficient data for a radius estimate "
              f"(levels={args.levels}, need >= 4)", file=sys.stderr)
    for k, est in enumerate(estimates, start=1):
        writer.writerow([k, repr(est)])
        if not (math.isfinite(est) and est > 0):
            failures.append(f"ratio estimate {k} is not a positive finite value")
    return buf.getvalue(), failures


def cmd_mc(args) -> tuple:
    try:
        config = SimConfig(start=(args.x, args.y), h=args.h, level=args.level,
                           paths=args.paths, seed=args.seed,
                           bridge_correction=not args.no_bridge)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = estimate_expected_sig(config)
    failures = []
    if result.count != config.paths:
        failures.append("accumulated path count does not match the request")
    config_echo = {
        "start": [args.x, args.y],
        "h": config.h,
        "level": config.level,
        "paths": config.paths,
        "seed": config.seed,
        "bridge_correction": config.bridge_correction,
    }
    buf = io.StringIO()
    buf.write("# schema: disksig.mc/1\n")
    buf.write(f"# config: {json.dumps(config_echo)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "mean", "stderr"])
    for n in range(config.level + 1):
        means = result.means[n]
        errs = result.stderrs[n]
        for idx, word in enumerate(words(n)):
            mean, err = float(means[idx]), float(errs[idx])
            writer.writerow([word, repr(mean), repr(err)])
            if not (math.isfinite(mean) and math.isfinite(err)):
                failures.append(f"component {word or '<empty>'} is not finite")
    writer.writerow(["exit_time", repr(result.exit_time_mean),
                     repr(result.exit_time_stderr)])
    if not (result.exit_time_mean > 0 and math.isfinite(result.exit_time_stderr)):
        failures.append("exit-time statistics are not finite and positive")
    return buf.getvalue(), failures


# -- argument parsing ---------------------------------------------------


def _build_parser(default_prec: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disksig",
        description="Expected signature of Brownian motion stopped at the "
                    "unit circle: exact hierarchy, development, closed form, "
                    "pole certificate, Monte Carlo.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("hierarchy", help="exact PDE hierarchy levels and checks")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--mode", choices=("tensor", "developed"), default="tensor")
    p.add_argument("--dump-polys", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("develop", help="exact partial sums of the developed series")
    p.add_argument("--lambda", dest="lam", type=_parse_rat, default=Fraction(1))
    p.add_argument("--x", type=_parse_rat, default=Fraction(0))
    p.add_argument("--y", type=_parse_rat, default=Fraction(0))
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("bessel", help="ball evaluation of J0/J1 or the boundary pairing")
    p.add_argument("--nu", type=int, choices=(0, 1), default=0)
    p.add_argument("--re", type=_parse_rat, default=Fraction(0))
    p.add_argument("--im", type=_parse_rat, default=Fraction(0))
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--pairing", type=_parse_rat, default=None, metavar="LAMBDA",
                   help="evaluate the pairing d at this rational lambda instead")
    p.add_argument("--precision", type=int, default=default_prec)
    p.add_argument("--out", required=True)

    p = sub.add_parser("pole", help="certified bracket for the first pole")
    p.add_argument("--width", type=_parse_rat, default=Fraction(1, 1000))
    p.add_argument("--precision", type=int, default=default_prec)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="exact partial sums against the closed form")
    p.add_argument("--lambda", dest="lam", type=_parse_rat, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--precision", type=int, default=default_prec)
    p.add_argument("--out", required=True)

    p = sub.add_parser("radius", help="ratio diagnostics for the convergence radius")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("mc", help="Monte Carlo expected-signature estimate")
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--h", type=float, default=1e-4, help="time step")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=SimConfig().seed)
    p.add_argument("--no-bridge", action="store_true",
                   help="disable the Brownian-bridge exit test")
    p.add_argument("--out", required=True)

    return parser


_HANDLERS = {
    "hierarchy": cmd_hierarchy,
    "develop": cmd_develop,
    "bessel": cmd_bessel,
    "pole": cmd_pole,
    "compare": cmd_compare,
    "radius": cmd_radius,
    "mc": cmd_mc,
}


def main(argv=None) -> int:
    try:
        default_prec = _default_precision()
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = _build_parser(default_prec)
    args = parser.parse_args(argv)
    try:
        text, failures = _HANDLERS[args.cmd](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SignChangeError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _atomic_write(args.out, text)
    _write_manifest(args.cmd, args, args.out, text)
    if failures:
        for item in failures:
            print(f"check failed: {item}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
