"""Command-line interface.

Exit codes: 0 success, 1 usage or I/O error, 2 no representation exists,
3 not hyperbolic, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .errors import DetRepError, NoRepresentationError, NotHyperbolicError, NumericalFailure
from .gmd import generalizedMixedDiscriminant
from .linalg import (
    DEFAULT_TOL,
    matrix_from_json,
    matrix_to_json,
    randomIntegerSymmetric,
    randomOrthogonal,
    randomPSD,
    randomUnipotent,
)
from .poly import MonicPencil, Polynomial, parsePolynomial, pencilMatches
from .psolve import PolySystem, TrackerConfig, solveSystem
from .quadratic import quadraticDetRep
from .trivariate import trivariateDetRep

EXIT_OK, EXIT_USAGE, EXIT_NOREP, EXIT_NOTHYP, EXIT_NUMERIC = 0, 1, 2, 3, 4

RANDOM_KINDS = {
    "integer-symmetric": lambda a, rng: randomIntegerSymmetric(a.n, a.bound, rng),
    "orthogonal": lambda a, rng: randomOrthogonal(a.n, rng),
    "psd": lambda a, rng: randomPSD(a.n, rng, a.rank),
    "unipotent": lambda a, rng: randomUnipotent(a.n, a.bound, rng),
}


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _read_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _poly_text(raw):
    # '#' starts a comment; a leading "f =" is tolerated
    lines = [ln.split("#", 1)[0] for ln in raw.splitlines()]
    text = " ".join(ln.strip() for ln in lines if ln.strip())
    if "=" in text:
        text = text.split("=", 1)[1]
    return text


def _load_poly(args) -> Polynomial:
    if args.file is None and args.expr is None:
        raise UsageError("give a polynomial with -f FILE or -e EXPR")
    text = _poly_text(_read(args.file) if args.file else args.expr)
    names = [v.strip() for v in args.vars.split(",")] if args.vars else None
    return parsePolynomial(text, names)


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DETREP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"DETREP_SEED must be an integer, got {env!r}") from None


def _emit_pencils(pencils, f, tol, output):
    residuals = [pencilMatches(_normalize(f, p), p, tol)[1] for p in pencils]
    if output == "text":
        blocks = []
        for p, r in zip(pencils, residuals):
            blocks.append(p.format(homogeneous=f.nvars > p.nvars) + f"\nresidual {r:.3g}")
        return "\n\n".join(blocks)
    return _dumps({"pencils": [p.to_json() for p in pencils], "residuals": residuals})


def _normalize(f: Polynomial, pencil: MonicPencil) -> Polynomial:
    """Scale ``f`` so its constant (or pure ``x0^d``) coefficient is 1."""
    if f.nvars == pencil.nvars + 1:
        lead = f.coefficient((f.degree(),) + (0,) * pencil.nvars)
    else:
        lead = f.constant_term()
    if lead == 0:
        return f
    return f / lead


def cmd_rep(args):
    f = _load_poly(args)
    if args.kind == "quadratic":
        pencils = [quadraticDetRep(f, args.tolerance, allow_hermitian=not args.no_hermitian)]
    else:
        config = TrackerConfig(seed=_seed(args))
        pencils = trivariateDetRep(f, args.strategy, args.tolerance, config)
    return _emit_pencils(pencils, f, args.tolerance, args.output)


def cmd_gmd(args):
    obj = _read_json(args.input)
    try:
        mats = [matrix_from_json(m) for m in obj["matrices"]]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.input}: expected field 'matrices' holding a list of matrices") from exc
    mult = obj.get("multiplicities")
    value = complex(generalizedMixedDiscriminant(mats, mult))
    if args.output == "text":
        return f"{value.real:.12g}" if value.imag == 0 else f"{value:.12g}"
    return _dumps({"value": {"re": value.real, "im": value.imag}})


def cmd_solve(args):
    obj = _read_json(args.system)
    try:
        system = PolySystem.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.system}: expected fields 'vars' and 'equations'") from exc
    kw = {"seed": _seed(args)}
    if args.endgame_tol is not None:
        kw["endgameTol"] = args.endgame_tol
    sols = solveSystem(system, TrackerConfig(**kw))
    return _dumps(sols.to_json())


def cmd_check(args):
    f = _load_poly(args)
    obj = _read_json(args.pencil)
    items = obj["pencils"] if isinstance(obj, dict) and "pencils" in obj else [obj]
    try:
        pencils = [MonicPencil.from_json(p) for p in items]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.pencil}: expected a pencil with field 'matrices'") from exc
    lines, ok_all = [], True
    for k, p in enumerate(pencils):
        ok, res = pencilMatches(_normalize(f, p), p, args.tolerance)
        ok_all &= ok
        lines.append(f"pencil {k}: {'match' if ok else 'MISMATCH'} residual {res:.3g}")
    out = "\n".join(lines)
    if not ok_all:
        raise _Mismatch(out)
    return out


class _Mismatch(Exception):
    pass


def cmd_random(args):
    rng = np.random.default_rng(_seed(args))
    return _dumps({"kind": args.kind, "matrix": matrix_to_json(RANDOM_KINDS[args.kind](args, rng))})


def _add_poly_input(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("-f", "--file", help="file holding the polynomial")
    g.add_argument("-e", "--expr", help="polynomial given inline")
    p.add_argument("--vars", help="comma-separated variable order (default: sorted names)")


def build_parser():
    parser = argparse.ArgumentParser(prog="detrep", description="Monic determinantal representations")
    parser.add_argument("--version", action="version", version=f"detrep {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("rep", help="compute representations")
    rep_sub = rep.add_subparsers(dest="kind", required=True)
    for kind in ("quadratic", "trivariate"):
        p = rep_sub.add_parser(kind)
        _add_poly_input(p)
        p.add_argument("--tolerance", type=_positive, default=DEFAULT_TOL)
        p.add_argument("--output", choices=("json", "text"), default="json")
        if kind == "quadratic":
            p.add_argument("--no-hermitian", action="store_true", help="refuse the 2x2 Hermitian case")
        else:
            p.add_argument("--strategy", choices=("direct", "orthostochastic"), default="direct")
            p.add_argument("--seed", type=int)
        p.set_defaults(func=cmd_rep)

    p = sub.add_parser("gmd", help="generalized mixed discriminant of matrices in a JSON file")
    p.add_argument("input")
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_gmd)

    p = sub.add_parser("solve", help="solve a square polynomial system")
    p.add_argument("-s", "--system", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--endgame-tol", type=_positive)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify that a pencil represents a polynomial")
    _add_poly_input(p)
    p.add_argument("-p", "--pencil", required=True)
    p.add_argument("--tolerance", type=_positive, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("random", help="random test matrices")
    p.add_argument("kind", choices=sorted(RANDOM_KINDS))
    p.add_argument("-n", type=int, default=3)
    p.add_argument("--seed", type=int)
    p.add_argument("--bound", type=int, default=20)
    p.add_argument("--rank", type=int)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage; 2 is reserved here
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _Mismatch as exc:
        print(exc)
        return EXIT_NOREP
    except NoRepresentationError as exc:
        print(f"no representation: {exc}", file=sys.stderr)
        for k, v in getattr(exc, "details", {}).items():
            print(f"  {k}: {v}", file=sys.stderr)
        return EXIT_NOREP
    except NotHyperbolicError as exc:
        print(f"not hyperbolic: {exc}", file=sys.stderr)
        return EXIT_NOTHYP
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DetRepError as exc:
        # syntax, scope, dimension problems: the input is at fault
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
