"""Command line entry point: ``cubiclat <subcommand> ...``.

Subcommands: roots, ideals, units, run, verify, stats. Every subcommand
accepts ``--config FILE`` with ``key=value`` lines (keys are the long flag
names, dashes or underscores); flags given on the command line win.

Exit codes: 0 success, 1 failed verification, 2 configuration error,
3 internal assertion (an emitted point broke an exactness check).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .congruence import is_prime, roots_mod_m
from .errors import CubicLatError, InvalidUnit, NoSolution, NotTotallyReal, SearchExhausted
from .field import (CubicPoly, basis_matrix, basis_matrix_g0, is_irreducible,
                    maximality_check, parse_element, parse_poly, real_roots)
from .ideals import (enumerate_ideal_tuples, gcd_condition, hnf, hnf_reduce, inverse_basis,
                     is_closed_under_alpha, lambda_from_roots, verify_obstruction)
from .intersection import PRINCIPAL, compute_points, read_csv, write_csv
from .stats import badlu_scan, build_report
from .units import find_totally_positive_generators, make_unit_system

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

# instance used by verify when the polynomial under test has none of its own
REFERENCE_OBSTRUCTION = (CubicPoly(-1, -2, -8), 2, 0)
VERIFY_NORM_CAP = 10**4
REPEATABLE = {"class_basis", "cusp_Y"}


class ConfigError(Exception):
    pass


class InternalError(Exception):
    pass


# ---------------------------------------------------------------------------
# config handling

def read_config(path):
    """key=value lines; '#' starts a comment; repeatable keys accumulate."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{n}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            k = k.lstrip("-").replace("-", "_")
            if k in REPEATABLE:
                out.setdefault(k, []).append(v)
            else:
                out[k] = v
    return out


def _coerce(parser_action, value):
    if isinstance(value, list):
        conv = parser_action.type or str
        return [conv(v) for v in value]
    if parser_action.type is not None:
        return parser_action.type(value)
    return value


VALUE_FLAGS = ("--poly", "--eps1", "--eps2", "--class-basis")


def _glue_negative_values(argv):
    """Let ``--poly -1,-2,1`` through: argparse would read the value as a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt[:1] == "-" and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def parse_args(argv=None):
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions}
        unknown = sorted(set(cfg) - set(actions))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        sub.set_defaults(**{k: _coerce(actions[k], v) for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


# ---------------------------------------------------------------------------
# shared helpers

def _poly(args) -> CubicPoly:
    try:
        F = parse_poly(args.poly)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not is_irreducible(F):
        raise ConfigError(f"polynomial {F} is reducible over Q")
    return F


def _check_dynamics(F: CubicPoly):
    problems = []
    if F.disc <= 0:
        problems.append(f"not totally real (disc {F.disc})")
    else:
        bad = maximality_check(F)
        if bad:
            problems.append(f"not maximal (Dedekind criterion fails at {bad})")
    if problems:
        raise ConfigError(f"polynomial {F}: " + "; ".join(problems))


def _units(args, F: CubicPoly):
    roots = real_roots(F)
    if args.eps1 or args.eps2:
        if not (args.eps1 and args.eps2):
            raise ConfigError("--eps1 and --eps2 must be given together")
        try:
            return make_unit_system(parse_element(args.eps1), parse_element(args.eps2), F, roots)
        except (InvalidUnit, ValueError) as exc:
            raise ConfigError(f"rejected unit override: {exc}") from None
    try:
        return find_totally_positive_generators(F, args.height_bound, roots)
    except SearchExhausted as exc:
        raise ConfigError(str(exc)) from None


def _class_data(args, F: CubicPoly):
    """(basis, inverse basis, norm, row matrix) per narrow class."""
    if not args.class_basis:
        return [(PRINCIPAL, PRINCIPAL, 1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])]
    out = []
    for text in args.class_basis:
        try:
            basis = [parse_element(t) for t in text.split(";")]
        except ValueError as exc:
            raise ConfigError(f"bad --class-basis {text!r}: {exc}") from None
        if len(basis) != 3 or not all(b.is_integral for b in basis):
            raise ConfigError(f"--class-basis {text!r} must list three elements of Z[alpha]")
        rows = [b.row() for b in basis]
        H = hnf(rows)
        if len(H) != 3 or not is_closed_under_alpha(H, F):
            raise ConfigError(f"--class-basis {text!r} does not span an ideal")
        nrm = H[0][0] * H[1][1] * H[2][2]
        out.append((basis, inverse_basis(H, F), nrm, H))
    return out


def _check_point(p, F: CubicPoly):
    if p.N != p.m1 * p.m1 * p.m2:
        raise InternalError(f"norm mismatch at {p.key}")
    if F(p.mu1) % p.m1 or F(p.mu2) % p.m2:
        raise InternalError(f"root condition violated at {p.key}")
    if not gcd_condition(p.m1, p.mu1, p.m2, p.mu2):
        raise InternalError(f"gcd criterion violated at {p.key}")
    if lambda_from_roots(p.mu1, p.m1, p.mu2, p.m2, F) != p.lam:
        raise InternalError(f"lambda mismatch at {p.key}")


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _dump_json(obj, path):
    text = json.dumps(obj, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands

def cmd_roots(args):
    F = _poly(args)
    if args.mod < 1:
        raise ConfigError("--mod must be positive")
    for r in roots_mod_m(F, args.mod):
        print(r)
    return EXIT_OK


def cmd_ideals(args):
    F = _poly(args)
    if args.max_norm < 1:
        raise ConfigError("--max-norm must be >= 1")
    fh = _open_out(args.out)
    try:
        fh.write("a,m1,mu1,m2,mu2,lambda,norm\n")
        for I in enumerate_ideal_tuples(F, args.max_norm):
            fh.write(f"{I.a},{I.m1},{I.mu1},{I.m2},{I.mu2},{I.lam},{I.norm}\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_units(args):
    F = _poly(args)
    _check_dynamics(F)
    U = _units(args, F)
    print(f"eps1 = {U.eps1}")
    print(f"eps2 = {U.eps2}")
    print(f"regulator = {U.regulator:.12g}")
    print("C_D = " + " ".join(f"{c:.12g}" for c in U.C_D))
    return EXIT_OK


def cmd_run(args):
    F = _poly(args)
    _check_dynamics(F)
    if args.max_norm < 1:
        raise ConfigError("--max-norm must be >= 1")
    U = _units(args, F)
    classes = _class_data(args, F)
    pts = compute_points(F, U, args.max_norm, [c[:3] for c in classes])
    for p in pts:
        _check_point(p, F)
    fh = _open_out(args.out)
    try:
        write_csv(pts, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.report:
        roots = real_roots(F)
        bad = []
        for _, _, nrm, rows in classes:
            if nrm == 1:
                gl = basis_matrix_g0(F)
            else:
                gl = basis_matrix(rows, roots, nrm * math.sqrt(F.disc), "gl")
            bad.append(badlu_scan(F, U, gl))
        # single class: report its scan; several: report the worst fraction per eps
        merged = [(e, max(b[i][1] for b in bad)) for i, (e, _) in enumerate(bad[0])]
        rep = build_report(pts, bins=args.bins, cusp_Y=args.cusp_Y or (2, 3, 5), badlu=merged)
        _dump_json(rep.to_json(), args.report)
    return EXIT_OK


def cmd_stats(args):
    with open(args.csv) as fh:
        pts = read_csv(fh)
    rep = build_report(pts, bins=args.bins, cusp_Y=args.cusp_Y or (2, 3, 5))
    _dump_json(rep.to_json(), args.report)
    return EXIT_OK


def _suite_lambda(F, X, inject):
    for I in enumerate_ideal_tuples(F, X):
        rows = I.rows(F)
        if inject:
            rows[0][2] += 1
        if not is_closed_under_alpha(rows, F):
            return f"lattice of {I.key} is not closed under alpha"
        J = hnf_reduce(rows, F)
        if J != I:
            return f"hnf round trip {I.key} -> {J.key}"
        if lambda_from_roots(I.mu1, I.m1, I.mu2, I.m2, F, shift=1) != I.lam:
            return f"lambda of {I.key} depends on the Bezout pair"
    return None


def _obstruction_instances(F, pmax=100):
    for p in range(2, pmax + 1):
        if not is_prime(p):
            continue
        for mu in range(p):
            if F(mu) % (p * p) == 0 and F.deriv(mu) % p == 0:
                yield p, mu


def _suite_obstruction(F, maximal):
    inst = list(_obstruction_instances(F))
    if maximal and inst:
        return f"maximal order admits obstruction instances {inst[:3]}"
    checks = [(F, p, mu) for p, mu in inst] or [REFERENCE_OBSTRUCTION]
    for G, p, mu in checks:
        if not verify_obstruction(G, p, mu):
            return f"I1*I2 != p*I1 for F={G}, p={p}, mu={mu}"
    return None


def _suite_cross(F, X, args):
    U = _units(args, F)
    pts = compute_points(F, U, X)
    got = sorted(p.key for p in pts)
    want = sorted(I.key for I in enumerate_ideal_tuples(F, X))
    if got != want:
        diff = sorted(set(got) ^ set(want))[:3]
        return f"ideal sets differ ({len(got)} vs {len(want)}), e.g. {diff}"
    for p in pts:
        _check_point(p, F)
    return None


def cmd_verify(args):
    F = _poly(args)
    X = min(args.max_norm, VERIFY_NORM_CAP)
    maximal = None
    if F.disc != 0:
        bad = maximality_check(F)
        maximal = not bad
        print(f"INFO maximality: {'maximal' if maximal else f'not maximal at {bad}'}")
    if not args.ring_only:
        _check_dynamics(F)
    suites = [("lambda-closure", lambda: _suite_lambda(F, X, args.inject_wrong_lambda)),
              ("obstruction", lambda: _suite_obstruction(F, bool(maximal)))]
    if not args.ring_only:
        suites.append(("cross-enumeration", lambda: _suite_cross(F, X, args)))
    for name, fn in suites:
        try:
            err = fn()
        except (NoSolution, InternalError, CubicLatError) as exc:
            err = f"{type(exc).__name__}: {exc}"
        if err:
            print(f"FAIL {name}: {err}")
            return EXIT_FAIL
        print(f"PASS {name}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="cubiclat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--poly", default="-1,-2,1", help="a1,a2,a3 of X^3+a1X^2+a2X+a3")
        p.add_argument("--config", help="key=value file; command-line flags take precedence")

    def unit_flags(p):
        p.add_argument("--height-bound", type=int, default=20)
        p.add_argument("--eps1", help="c0,c1,c2 of a totally positive unit (with --eps2)")
        p.add_argument("--eps2")

    p = subs.add_parser("roots", help="roots of F mod m")
    common(p)
    p.add_argument("--mod", type=int, required=True)
    p.set_defaults(func=cmd_roots)

    p = subs.add_parser("ideals", help="content-one ideals up to a norm bound, as CSV")
    common(p)
    p.add_argument("--max-norm", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ideals)

    p = subs.add_parser("units", help="totally positive unit generators")
    common(p)
    unit_flags(p)
    p.set_defaults(func=cmd_units)

    p = subs.add_parser("run", help="intersection points as CSV plus a JSON stats report")
    common(p)
    unit_flags(p)
    p.add_argument("--max-norm", type=int, default=10**4)
    p.add_argument("--class-basis", action="append", default=[],
                   help="one narrow class: 'c0,c1,c2;c0,c1,c2;c0,c1,c2' spanning an integral ideal")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--cusp-Y", type=float, action="append", dest="cusp_Y", default=[])
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--seed", type=int, default=0,
                   help="recorded for reproducibility; the pipeline itself is deterministic")
    p.set_defaults(func=cmd_run)

    p = subs.add_parser("verify", help="exact self-checks")
    common(p)
    unit_flags(p)
    p.add_argument("--max-norm", type=int, default=VERIFY_NORM_CAP)
    p.add_argument("--ring-only", action="store_true",
                   help="only ring-level checks (allows non-maximal or complex cubics)")
    p.add_argument("--inject-wrong-lambda", action="store_true",
                   help="fault injection: perturb lambda, verification must fail")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("stats", help="recompute the JSON report from a CSV")
    p.add_argument("csv")
    p.add_argument("--config")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--cusp-Y", type=float, action="append", dest="cusp_Y", default=[])
    p.add_argument("--report", help="JSON path (default stdout)")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return args.func(args)
    except (ConfigError, NotTotallyReal) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
