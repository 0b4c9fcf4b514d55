"""Command-line entry point: figure data as CSV, gate reports as JSON, state transforms.

Exit codes: 0 ok, 1 I/O failure, 2 invalid parameters or input, 3 heralding
outcome too improbable, 4 insufficient cutoff.  Output files are written
atomically, so a failed run never leaves a partial or stale file behind.
"""

import argparse
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from .analytic import delta_probabilities, tmsv_probabilities
from .basis import change_basis, displaced_distribution
from .errors import ImprobableOutcomeError, InsufficientCutoffError
from .fock import CutoffPolicy, FockVector, fock_state
from .gates import (apd_ratio_curves, run_cz_direct, run_cz_interferometer, run_hadamard_hybrid,
                    run_hadamard_inverse, run_hadamard_micro)

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_IMPROBABLE, EXIT_CUTOFF = 0, 1, 2, 3, 4
PAD_ENV = "DFOCK_DEFAULT_CUTOFF_PAD"
QUBIT_TOL = 1e-6


class ValidationError(ValueError):
    pass


def _policy(args):
    pad = os.environ.get(PAD_ENV)
    kwargs = {}
    if pad is not None:
        try:
            kwargs["base_pad"] = int(pad)
        except ValueError:
            raise ValidationError(f"{PAD_ENV} must be an integer, got {pad!r}") from None
        if kwargs["base_pad"] < 0:
            raise ValidationError(f"{PAD_ENV} must be non-negative")
    if args.tail_tol is not None:
        if not 0 < args.tail_tol < 1:
            raise ValidationError("--tail-tol must lie in (0, 1)")
        kwargs["tail_tol"] = args.tail_tol
    return CutoffPolicy(**kwargs)


def _fmt(x):
    return format(float(x), ".17g")


def _csv(header, rows, comments):
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(str(v) if isinstance(v, (int, np.integer)) else _fmt(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


def _params_comment(pairs):
    return "parameters: " + " ".join(f"{k}={v}" for k, v in pairs)


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".dfock-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require(cond, message):
    if not cond:
        raise ValidationError(message)


def _finite(name, value):
    _require(value is not None and math.isfinite(abs(value)), f"--{name} must be finite")
    return value


def _rows_limit(args, default):
    if args.cutoff is None:
        return default
    _require(args.cutoff >= 0, "--cutoff must be non-negative")
    return args.cutoff


def _probability_table(p, n_max, comments):
    total = float(np.sum(p))
    comments = comments + [f"tail_tolerance: {_fmt(abs(1.0 - total))} (1 - column sum)"]
    return [(n, p[n]) for n in range(n_max + 1)], comments


# ------------------------------------------------------------------ figures

def _fig2(args, policy):
    alpha = _finite("alpha", args.alpha if args.alpha is not None else 3.0)
    l = 1 if args.n is None else args.n
    _require(l >= 0, "--n must be non-negative")
    n_max = _rows_limit(args, policy.cutoff_for(alpha, l))
    p = displaced_distribution(fock_state(l, l), alpha, n_max, policy)
    rows, comments = _probability_table(
        p, n_max, [_params_comment([("figure", "fig2"), ("alpha", _fmt_c(alpha)), ("l", l)])])
    return _csv(["n", f"P_{l}n"], rows, comments)


def _fig4_delta(args, policy):
    alpha = _finite("alpha", args.alpha if args.alpha is not None else 1.0)
    sign = args.sign
    n_max = _rows_limit(args, policy.cutoff_for(alpha, 1))
    p = delta_probabilities(sign, alpha, n_max)
    rows, comments = _probability_table(
        p, n_max, [_params_comment([("figure", "fig4-delta"), ("alpha", _fmt_c(alpha)),
                                    ("sign", sign)])])
    return _csv(["n", f"P_n{sign}"], rows, comments)


def _fig4_tmsv(args, policy):
    delta = _finite("delta", args.delta if args.delta is not None else 1.0)
    r = args.r if args.r is not None else 0.5
    _require(r > 0, "--r must be positive")
    default = policy.squeeze_cutoff(r, math.ceil(abs(delta) ** 2))
    n_max = _rows_limit(args, default)
    p = tmsv_probabilities(delta, r, n_max)
    rows, comments = _probability_table(
        p, n_max, [_params_comment([("figure", "fig4-tmsv"), ("delta", _fmt_c(delta)),
                                    ("r", _fmt(r))])])
    return _csv(["n", "P_n"], rows, comments)


def _fig6(args, policy):
    delta = _finite("delta", args.delta if args.delta is not None else 1.0)
    k_max = 5 if args.kmax is None else args.kmax
    _require(k_max >= 1, "--kmax must be at least 1")
    if args.s is None:
        grid = [round(0.05 * i, 10) for i in range(1, 31)]
    else:
        grid = args.s
    _require(all(s > 0 and math.isfinite(s) for s in grid), "--s values must be positive")
    rows = apd_ratio_curves(delta, grid, k_max + 1)
    header = ["s"] + [f"P1/P{k}" for k in range(2, k_max + 2)]
    comments = [_params_comment([("figure", "fig6"), ("delta", _fmt_c(delta)), ("kmax", k_max)]),
                "tail_tolerance: 0 (closed-form ratios, no truncation)"]
    return _csv(header, rows, comments)


FIGURES = {"fig2": _fig2, "fig4-delta": _fig4_delta, "fig4-tmsv": _fig4_tmsv, "fig6": _fig6}


def _fmt_c(z):
    z = complex(z)
    return _fmt(z.real) if z.imag == 0 else f"{_fmt(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt(abs(z.imag))}j"


# -------------------------------------------------------------------- gates

def _qubit(a, b, names):
    _require(a is not None and b is not None, f"--{names[0]} and --{names[1]} are required")
    norm = abs(a) ** 2 + abs(b) ** 2
    _require(abs(norm - 1.0) <= QUBIT_TOL,
             f"|{names[0]}|^2 + |{names[1]}|^2 must equal 1 (got {norm:.9g})")
    scale = math.sqrt(norm)
    return a / scale, b / scale


def _positive(name, value, default, upper=None):
    v = default if value is None else value
    _require(math.isfinite(v) and v > 0, f"--{name} must be positive")
    if upper is not None:
        _require(v < upper, f"--{name} must be below {upper}")
    return v


def _gate(args, policy):
    a, b = _qubit(args.a, args.b, ("a", "b"))
    c = args.cutoff
    if c is not None:
        _require(c >= 0, "--cutoff must be non-negative")
    if args.which == "cz":
        if args.a1 is not None or args.b1 is not None:
            # the target amplitudes fix delta through a1 / b1 = delta*
            _require(args.delta is None, "give either --delta or --a1/--b1, not both")
            a1, b1 = _qubit(args.a1, args.b1, ("a1", "b1"))
            _require(abs(b1) > 1e-12, "b1 = 0 has no interferometer setting; use cz-direct")
            delta = (a1 / b1).conjugate()
        else:
            delta = _finite("delta", args.delta if args.delta is not None else 1.0)
        _require(delta != 0, "--delta must be non-zero")
        s = _positive("s", args.s, 0.3)
        rbs = _positive("rbs", args.rbs, 0.2, 1.0)
        rep = run_cz_interferometer(a, b, s, rbs, None if c is None else (c, 6, 8, 8), delta,
                                    policy=policy)
    elif args.which == "cz-direct":
        a1, b1 = _qubit(args.a1, args.b1, ("a1", "b1"))
        T = _positive("T", args.T, 0.99, 1.0)
        herald = 2 if args.herald_mode is None else args.herald_mode
        _require(herald in (0, 1, 2), "--herald-mode must be 0, 1 or 2")
        rep = run_cz_direct(a, b, a1, b1, T, None if c is None else (c,), herald, policy)
    elif args.which == "hadamard":
        s = _positive("s", args.s, 0.3)
        rbs = _positive("rbs", args.rbs, 0.2, 1.0)
        rep = run_hadamard_hybrid(a, b, s, rbs, None if c is None else (c, 6, 8, 8), policy)
    elif args.which == "hadamard-micro":
        s = _positive("s", args.s, 0.25)
        rbs = _positive("rbs", args.rbs, 0.2, 1.0)
        n = 1 if args.n is None else args.n
        _require(n >= 0, "--n must be non-negative")
        rep = run_hadamard_micro(a, b, s, rbs, n, policy=policy)
    else:
        s = _positive("s", args.s, 0.3)
        rbs = _positive("rbs", args.rbs, 0.2, 1.0)
        T = _positive("T", args.T, 0.98, 1.0)
        rep = run_hadamard_inverse(a, b, s, rbs, T, None if c is None else (c, None),
                                   policy=policy)
    return rep.to_json() + "\n"


# ---------------------------------------------------------------- transform

def _load_state(path):
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc.msg})") from None
    _require(isinstance(data, list) and len(data) > 0, f"{path}: expected a non-empty JSON array")
    amps = []
    for i, item in enumerate(data):
        if isinstance(item, (int, float)) and not isinstance(item, bool):
            amps.append(complex(item))
        elif (isinstance(item, list) and len(item) == 2
              and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)):
            amps.append(complex(item[0], item[1]))
        else:
            raise ValidationError(f"{path}: entry {i} is not a number or an [re, im] pair")
    amps = np.array(amps, dtype=complex)
    _require(np.all(np.isfinite(amps)), f"{path}: amplitudes must be finite")
    return amps


def _xform(args, policy):
    alpha = _finite("alpha", args.alpha if args.alpha is not None else 0.0)
    amps = _load_state(args.state)
    norm = float(np.vdot(amps, amps).real)
    _require(norm > 0, "state has zero norm")
    if abs(norm - 1.0) > QUBIT_TOL:
        print(f"warning: state norm^2 is {norm:.9g}; renormalizing", file=sys.stderr)
    amps = FockVector(amps).normalized().amplitudes
    n_in = amps.size - 1
    cutoff = policy.cutoff_for(alpha, n_in) if args.cutoff is None else args.cutoff
    _require(cutoff >= 0, "--cutoff must be non-negative")
    b = change_basis(amps, 0.0, alpha, cutoff, policy)
    p = np.abs(b) ** 2
    comments = [_params_comment([("alpha", _fmt_c(alpha)), ("input_cutoff", n_in),
                                 ("cutoff", cutoff)]),
                f"tail_tolerance: {_fmt(abs(1.0 - float(p.sum())))} (1 - column sum)"]
    rows = [(n, b[n].real, b[n].imag, p[n]) for n in range(cutoff + 1)]
    return _csv(["n", "re_b", "im_b", "abs_b_sq"], rows, comments)


# ------------------------------------------------------------------- parser

def build_parser():
    parser = argparse.ArgumentParser(prog="dfock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--cutoff", type=int, help="Fock cutoff override")
        p.add_argument("--tail-tol", type=float, help="tail tolerance override")
        p.add_argument("--out", help="output path (default: stdout)")

    fig = sub.add_parser("figure", help="figure data as CSV")
    fig.add_argument("which", choices=sorted(FIGURES))
    fig.add_argument("--alpha", type=complex)
    fig.add_argument("--n", type=int, help="photon number l of |l> (fig2)")
    fig.add_argument("--delta", type=complex)
    fig.add_argument("--r", type=float)
    fig.add_argument("--s", type=float, nargs="+", help="squeezing grid (fig6)")
    fig.add_argument("--kmax", type=int)
    fig.add_argument("--sign", choices=["+", "-"], default="-", help="superposition sign (fig4-delta)")
    common(fig)

    gate = sub.add_parser("gate", help="run a gate and emit a JSON report")
    gate.add_argument("which", choices=["cz", "cz-direct", "hadamard", "hadamard-micro",
                                        "hadamard-inverse"])
    for name in ("a", "b", "a1", "b1", "delta"):
        gate.add_argument(f"--{name}", type=complex)
    for name in ("s", "rbs", "T"):
        gate.add_argument(f"--{name}", type=float)
    gate.add_argument("--n", type=int, help="herald photon number (hadamard-micro)")
    gate.add_argument("--herald-mode", type=int, help="herald mode (cz-direct)")
    common(gate)

    xf = sub.add_parser("xform", help="alpha-representation of a Fock-basis state")
    xf.add_argument("state", help="JSON array of amplitudes, each [re, im] or a number")
    xf.add_argument("--alpha", type=complex)
    common(xf)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        policy = _policy(args)
        if args.command == "figure":
            text = FIGURES[args.which](args, policy)
        elif args.command == "gate":
            text = _gate(args, policy)
        else:
            text = _xform(args, policy)
        _write(text, args.out)
    except InsufficientCutoffError as exc:
        hint = "" if exc.minimal_cutoff is None else f" (need cutoff >= {exc.minimal_cutoff})"
        print(f"error: {exc}{hint}", file=sys.stderr)
        return EXIT_CUTOFF
    except ImprobableOutcomeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMPROBABLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))
