"""Command-line front end.

Subcommands::

    norm     Orlicz / exponential / Lebesgue norm of a radial profile
    sweep    sharpness metrics of the counterexample family as CSV
    verify   named pass/fail suites
    trace    Moser iteration trace
    chain    Harnack chain of norms
    osc      oscillation recursion

Exit codes: 0 success, 1 usage or input error, 2 certified infinite result.
Numbers are printed with 6 significant digits next to the tolerance used;
``ORLICZ_TOL`` overrides the default tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .counterexample import CSV_FIELDS, ParameterError, build_counterexample, sweep
from .inequalities.continuity import OscillationState, log_kbar, oscillation_recursion
from .inequalities.harnack import CHAIN_LABELS, harnack_chain
from .inequalities.iteration import Q_STOP, moser_trace
from .inequalities.serrin import InequalityError
from .orlicz import (DEFAULT_TOL, OrliczError, E_spec, M_spec, N_spec, alt_norm, exp_norm,
                     lebesgue_norm, luxemburg_norm)
from .pde import CoefficientSet, PdeProblem
from .profiles import (C0, C1, DISCONTINUOUS, BallDomain, ProfileError, RadialProfile,
                       bump, constant, constant_piece, log_piece, log_profile,
                       polynomial_cap, power_piece, truncated_log)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_INF = 0, 1, 2
SPACES = ("N", "M", "E", "ALT", "Lp")
CONTINUITY = {"C0": C0, "C1": C1, "none": DISCONTINUOUS}
# hand-written JSON profiles are matched to this relative accuracy at breakpoints
JSON_CONTINUITY_TOL = 1e-9


class InputError(ValueError):
    pass


def fmt(x: float) -> str:
    if math.isinf(x):
        return "INF" if x > 0 else "-INF"
    return f"{x:.6g}"


def default_tol() -> float:
    raw = os.environ.get("ORLICZ_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"ORLICZ_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise InputError("ORLICZ_TOL must be positive")
    return tol


# -- profiles ---------------------------------------------------------------

def _piece(spec: dict, lo: float, hi: float):
    kind = spec.get("kind")
    try:
        if kind == "constant":
            return constant_piece(spec["value"]), 0.0
        if kind == "power":
            return power_piece(spec["a"], spec["b"], spec["p"]), 0.0
        if kind == "log":
            alpha = float(spec.get("alpha", 1.0))
            return log_piece(alpha, spec.get("c", 0.0)), alpha if lo == 0 else 0.0
        if kind == "bump":
            # the bump fills the whole piece
            return bump(lo, hi, hi, spec.get("height", 1.0)).pieces[-1], 0.0
    except KeyError as exc:
        raise InputError(f"{kind} piece is missing parameter {exc}") from None
    raise InputError(f"unknown piece kind {kind!r}")


def profile_from_json(data: dict) -> RadialProfile:
    """Build a profile from ``{"pieces": [{"kind": ..., "from": ..., "to": ...}, ...]}``."""
    if not isinstance(data, dict) or not isinstance(data.get("pieces"), list) or not data["pieces"]:
        raise InputError("profile JSON needs a non-empty 'pieces' list")
    cont = data.get("continuity", "C0")
    if cont not in CONTINUITY:
        raise InputError(f"continuity must be one of {sorted(CONTINUITY)}")
    bp, pieces, alpha = [0.0], [], 0.0
    for i, spec in enumerate(data["pieces"]):
        if not isinstance(spec, dict):
            raise InputError(f"piece {i} is not an object")
        try:
            lo, hi = float(spec["from"]), float(spec["to"])
        except (KeyError, TypeError, ValueError):
            raise InputError(f"piece {i} needs numeric 'from' and 'to'") from None
        if lo != bp[-1] or not hi > lo:
            raise InputError(f"piece {i} must start at {bp[-1]} and have to > from")
        piece, a = _piece(spec, lo, hi)
        alpha = max(alpha, a)
        bp.append(hi)
        pieces.append(piece)
    try:
        prof = RadialProfile(bp, pieces, CONTINUITY[cont], alpha)
    except (ProfileError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if not prof.check_continuity(JSON_CONTINUITY_TOL):
        raise InputError(f"profile is not {cont} at its breakpoints")
    return prof


def _numbers(text: str, count: int) -> List[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad numeric arguments {text!r}") from None
    if len(vals) != count:
        raise InputError(f"expected {count} comma-separated numbers, got {text!r}")
    return vals


def parse_profile(ref: str, R: float) -> RadialProfile:
    """``const:c``, ``log:alpha``, ``tlog:L``, ``cap:c,p``, ``counterexample:eps``,
    an inline JSON object or the path of a JSON file."""
    ref = ref.strip()
    if ref.startswith("{"):
        try:
            data = json.loads(ref)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed profile JSON: {exc}") from None
        prof = profile_from_json(data)
    elif ":" in ref and not Path(ref).exists():
        kind, _, arg = ref.partition(":")
        try:
            if kind == "const":
                return constant(_numbers(arg, 1)[0], R)
            if kind == "log":
                alpha = _numbers(arg, 1)[0]
                if alpha < 0:
                    raise InputError("log coefficient must be nonnegative")
                return log_profile(alpha, R)
            if kind == "tlog":
                return truncated_log(_numbers(arg, 1)[0], R)
            if kind == "cap":
                c, p = _numbers(arg, 2)
                return polynomial_cap(c, p, R)
            if kind == "counterexample":
                prof = build_counterexample(2, _numbers(arg, 1)[0]).u
            else:
                raise InputError(f"unknown profile kind {kind!r}")
        except (ProfileError, ParameterError) as exc:
            raise InputError(str(exc)) from None
    else:
        path = Path(ref)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise InputError(f"cannot read profile file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed profile JSON in {path}: {exc}") from None
        prof = profile_from_json(data)
    if prof.radius < R * (1 - 1e-15):
        raise InputError(f"profile has radius {prof.radius:g} < requested radius {R:g}")
    return prof.restricted(R)


# -- commands -----------------------------------------------------------------

def _ball(args) -> BallDomain:
    if args.n < 1 or not args.radius > 0:
        raise InputError("need n >= 1 and radius > 0")
    return BallDomain(args.n, args.radius)


def cmd_norm(args) -> int:
    tol = args.tol
    ball = _ball(args)
    prof = parse_profile(args.profile, ball.R)
    if args.space == "Lp":
        if args.p is None:
            raise InputError("--space Lp needs --p")
        value = lebesgue_norm(prof, args.p, ball, tol)
        if math.isinf(value):
            print("INF")
            print(f"tol={tol:g}")
            return EXIT_INF
        print(f"value={fmt(value)} tol={tol:g}")
        return EXIT_OK
    if args.s is None:
        raise InputError(f"--space {args.space} needs --s")
    if args.space == "N":
        res = luxemburg_norm(prof, N_spec(args.n, args.s), ball, tol)
    elif args.space == "M":
        res = luxemburg_norm(prof, M_spec(args.n, args.s), ball, tol)
    elif args.space == "E":
        E_spec(args.n, args.s)  # validates s
        res = exp_norm(prof, args.s, ball, tol)
    else:
        res = alt_norm(prof, args.s, ball, tol)
    if not res.finite:
        print("INF")
        print(f"reason={res.diagnostic or 'functional infinite at every level'} tol={tol:g}")
        return EXIT_INF
    lo, hi = res.bracket
    # the alternative norm is a minimum over lambda; report where it is attained
    at = "lambda_min" if args.space == "ALT" else "value"
    print(f"value={fmt(res.value)} tol={tol:g}")
    print(f"bracket({at})=[{fmt(lo)}, {fmt(hi)}] tol={tol:g}")
    print(f"J({at})={fmt(res.functional_at_value)} tol={tol:g}")
    return EXIT_OK


def _float_list(text: str, name: str) -> List[float]:
    items = [x for x in text.replace(",", " ").split() if x]
    try:
        return [float(x) for x in items]
    except ValueError:
        raise InputError(f"--{name} must be a comma-separated list of numbers") from None


def sweep_rows(n: int, eps_list: Sequence[float], r_list: Sequence[float], tol: float,
               workers: Optional[int] = None) -> List[List[str]]:
    """CSV rows (header first) with a trailing tolerance column."""
    rows = [list(CSV_FIELDS) + ["tol"]]
    for rep in sweep(n, eps_list, r_list, tol, workers):
        d = rep.as_row()
        rows.append([fmt(d[k]) for k in CSV_FIELDS] + [f"{tol:g}"])
    return rows


def cmd_sweep(args) -> int:
    eps_list = _float_list(args.eps_list, "eps-list")
    r_list = _float_list(args.r_list, "r-list")
    if any(not r > 0 for r in r_list):
        raise InputError("r values must be positive")
    try:
        rows = sweep_rows(args.n, eps_list, r_list, args.tol, args.workers)
    except ParameterError as exc:
        raise InputError(str(exc)) from None
    if args.out == "-":
        csv.writer(sys.stdout, lineterminator="\n").writerows(rows)
        return EXIT_OK
    try:
        with open(args.out, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc}") from None
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise InputError(f"unknown suite {args.suite!r}")
    checks = run_suite(args.suite, args.n, args.tol)
    width = max(len(c.name) for c in checks)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.detail}")
    k = sum(c.passed for c in checks)
    status = "PASS" if k == len(checks) else "FAIL"
    print(f"SUITE {args.suite} {status} {k}/{len(checks)} tol={args.tol:g}")
    return EXIT_OK if status == "PASS" else EXIT_INPUT


def _subject(args, R: float):
    """The counterexample (with its potential) or a user profile."""
    if args.profile is not None:
        return parse_profile(args.profile, R), None
    sol = build_counterexample(args.n, args.eps)
    return sol.u, PdeProblem(sol.u, sol.V, args.n)


def cmd_trace(args) -> int:
    u, problem = _subject(args, 1.0)
    coeffs = CoefficientSet.model(problem, args.r) if problem else None
    tr = moser_trace(u, coeffs, args.R, args.r, args.tol, args.q_stop)
    tol = args.tol
    print(f"j,q,h,value tol={tol:g}")
    for (j, q, h, _), val in zip(tr.schedule.entries, tr.values):
        print(f"{j},{fmt(q)},{fmt(h)},{fmt(val)}")
    print(f"stop={tr.stop_reason}")
    if not tr.finite:
        print("INF")
        return EXIT_INF
    print(f"k={fmt(tr.k)} sup_R={fmt(tr.sup_R)} terminal_gap={fmt(tr.terminal_gap)} tol={tol:g}")
    print(f"C_sup={fmt(tr.sup_constant)} C_grad={fmt(tr.grad_constant)} tol={tol:g}")
    return EXIT_OK


def cmd_chain(args) -> int:
    u, _ = _subject(args, 8 * args.R0 if args.profile is not None else 1.0)
    rep = harnack_chain(u, args.R0, args.r, args.n, args.k, args.shift, args.tol)
    tol = args.tol
    for label, q in zip(CHAIN_LABELS, rep.quantities):
        print(f"{label}={fmt(q)} tol={tol:g}")
    for i, ratio in enumerate(rep.ratios, 1):
        print(f"link{i}={fmt(ratio)}")
    if not rep.finite:
        print("INF")
        return EXIT_INF
    print(f"harnack_quotient={fmt(rep.harnack_quotient)} tol={tol:g}")
    return EXIT_OK


def cmd_osc(args) -> int:
    if args.harnack_C is not None:
        state = OscillationState.from_harnack_constant(args.harnack_C, args.gamma,
                                                       log_kbar(args.gamma, args.kbar_C))
    else:
        kbar = log_kbar(args.gamma, args.kbar_C) if args.kbar_C else (lambda rho: 0.0)
        state = OscillationState(args.theta, args.tau, args.gamma, kbar)
    res = oscillation_recursion(state, args.R, args.m_max)
    print("m,omega")
    for m, w in enumerate(res.omega):
        print(f"{m},{fmt(w)}")
    print(f"K={fmt(res.K)} slope={fmt(res.slope)} gamma={fmt(res.gamma)} "
          f"bound_holds={res.bound_holds()}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser(tol: float) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orlicz-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="norm of a radial profile")
    p.add_argument("--space", choices=SPACES, required=True)
    p.add_argument("--s", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--profile", required=True,
                   help="const:c, log:alpha, tlog:L, cap:c,p, counterexample:eps, JSON or a JSON file")
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("sweep", help="counterexample sharpness table as CSV")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--eps-list", default="0.1,0.01,0.001,0.0001,1e-05,1e-06")
    p.add_argument("--r-list", default="1")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run a named check suite")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}, all")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(func=cmd_verify)

    for name, func, help_ in (("trace", cmd_trace, "Moser iteration trace"),
                              ("chain", cmd_chain, "Harnack chain of norms")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--eps", type=float, default=1e-2, help="counterexample parameter")
        p.add_argument("--profile", default=None, help="use this profile instead")
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--tol", type=float, default=tol)
        p.set_defaults(func=func)
        if name == "trace":
            p.add_argument("--r", type=float, default=0.9)
            p.add_argument("--R", type=float, default=0.25)
            p.add_argument("--q-stop", type=float, default=Q_STOP)
        else:
            p.add_argument("--r", type=float, default=0.8)
            p.add_argument("--R0", type=float, default=1.0 / 16)
            p.add_argument("--k", type=float, default=0.0)
            p.add_argument("--shift", type=float, default=1e-9)

    p = sub.add_parser("osc", help="oscillation recursion")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.25)
    p.add_argument("--kbar-C", type=float, default=1.0,
                   help="kbar(rho) = C |log rho|^-gamma; 0 switches the forcing off")
    p.add_argument("--harnack-C", type=float, default=None,
                   help="derive theta and tau from a Harnack constant")
    p.add_argument("--R", type=float, default=3.0**-10)
    p.add_argument("--m-max", type=int, default=80)
    p.set_defaults(func=cmd_osc)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        tol = default_tol()
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    parser = build_parser(tol)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if hasattr(args, "tol") and not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ProfileError, OrliczError, ParameterError, InequalityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
