"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure or obstruction, 2 usage,
parse or I/O error. The default tolerance 1e-8 can be overridden with the
``PROJPATHS_TOL`` environment variable or ``--tol``.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import generate, textio
from . import linalg as la
from .blocks import split_connect, verify_decomposition
from .components import Certificate, certify_orbit, verify_certificate
from .errors import MathError, ParseError, ProjPathsError
from .homotopy import DEFAULT_ETA, DEFAULT_STEPS, SampledPath, connect_projectors, lift_path
from .projectors import validate_projector

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


class _Failure(Exception):
    """A command finished its work but the result does not pass."""


def default_tol():
    raw = os.environ.get("PROJPATHS_TOL")
    if raw is None:
        return 1e-8
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"PROJPATHS_TOL is not a number: {raw!r}") from None


def _read_matrix(path):
    try:
        return textio.read_matrix(path)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _emit(out, text):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_validate(args):
    P = validate_projector(_read_matrix(args.file), args.tol)
    print(f"rank {P.rank}")
    print(f"residual {P.residual:.3e}")


def cmd_connect(args):
    P = validate_projector(_read_matrix(args.p), args.tol)
    Q = validate_projector(_read_matrix(args.q), args.tol)
    path = connect_projectors(P, Q, args.steps, args.eta)
    if args.out:
        textio.write_path(args.out, path)
    print(f"samples {len(path)}")
    print(f"max idempotency residual {path.idempotency_residuals().max():.3e}")
    print(f"max gap {path.max_gap():.3e}")


def cmd_lift(args):
    c = textio.read_path(args.path)
    c = SampledPath(c.kind, c.times, c.matrices, args.tol)
    bundle = lift_path(c)
    if args.out:
        textio.write_path(args.out, bundle.lift)
    r = bundle.max_residual
    print(f"samples {len(bundle.lift)}")
    relation = "<=" if r <= args.tol else ">"
    print(f"max intertwining residual {r:.3e} {relation} {args.tol:.0e}")
    if r > args.tol:
        raise _Failure("lift residual above tolerance")


def cmd_decompose(args):
    T = _read_matrix(args.file)
    B = split_connect(T, args.k, args.tol, args.steps)
    report = verify_decomposition(B, T, args.tol)
    if args.out:
        textio.write_path(args.out, B.path)
    upper, lower = B.offdiag_norms()
    print(f"k {B.k}")
    print(f"offdiag norms {upper:.3e} {lower:.3e}")
    for line in report.lines():
        print(line)
    if not report.passed:
        raise _Failure("decomposition failed verification: " + ", ".join(report.failures))


def cmd_certify(args):
    P = validate_projector(_read_matrix(args.p), args.tol)
    t = _read_matrix(args.t)
    cert = certify_orbit(P, t, args.tol, args.steps)
    if args.out:
        Path(args.out).write_text(json.dumps(cert.to_dict(), indent=1) + "\n")
    print(f"outcome {cert.outcome}")
    print(f"component of t {cert.invariant.label.value}")
    print(f"cond(t) {cert.cond_t:.3e}")
    for name, value in cert.residuals.items():
        print(f"{name} residual {value:.3e}")
    if not cert.connected:
        raise _Failure(cert.obstruction)


def cmd_verify(args):
    try:
        data = json.loads(Path(args.certificate).read_text())
        cert = Certificate.from_dict(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"{args.certificate}: malformed certificate ({exc})") from None
    P = _read_matrix(args.p) if args.p else None
    t = _read_matrix(args.t) if args.t else None
    ok, checks = verify_certificate(cert, P, t)
    for name, (value, bound, passed) in checks.items():
        print(f"{name:<22} {value:.3e}  bound {bound:.1e}  {'ok' if passed else 'FAIL'}")
    if not ok:
        raise _Failure("certificate did not verify")


def cmd_gen(args):
    fld = la.FieldTag(args.field)
    rng = generate.make_rng(args.seed)
    if args.kind == "projector":
        rank = args.rank if args.rank is not None else args.n // 2
        if not 0 <= rank <= args.n:
            raise ParseError(f"--rank {rank} outside [0, {args.n}]")
        M = generate.random_projector(rng, args.n, rank, fld)
    else:
        M = generate.random_invertible(rng, args.n, fld)
    _emit(args.out, textio.render_matrix(M))


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="projpaths",
        description="Paths of projectors, their lifts to invertibles, and connectivity certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance (default 1e-8 or $PROJPATHS_TOL)")
        return p

    p = add("validate", cmd_validate, "check that a matrix file is a projector")
    p.add_argument("file")

    p = add("connect", cmd_connect, "path of projectors between two projectors of equal rank")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--out")

    p = add("lift", cmd_lift, "lift a projector path to a path of invertibles")
    p.add_argument("path")
    p.add_argument("--out")

    p = add("decompose", cmd_decompose, "connect an invertible to a block-diagonal one")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS)
    p.add_argument("--out")

    p = add("certify", cmd_certify, "certify that t P t^-1 is connected to P")
    p.add_argument("p")
    p.add_argument("t")
    p.add_argument("--steps", type=_positive_int, default=DEFAULT_STEPS)
    p.add_argument("--out")

    p = add("verify", cmd_verify, "re-verify a certificate written by certify")
    p.add_argument("certificate")
    p.add_argument("--p", help="projector file to check the digest against")
    p.add_argument("--t", help="conjugating matrix file to check the digest against")

    p = add("gen", cmd_gen, "write a seeded random projector or invertible")
    p.add_argument("--kind", choices=["projector", "invertible"], required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--rank", type=int)
    p.add_argument("--field", choices=["R", "C"], default="R")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is None:
            args.tol = default_tol()
        if args.tol <= 0:
            raise ParseError("tolerance must be positive")
        args.func(args)
    except _Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except MathError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (ProjPathsError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
