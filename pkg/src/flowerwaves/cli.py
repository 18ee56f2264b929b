"""Command-line front end: states, spectra, bifurcation data, diagrams.

Every state-producing command accepts the frequency as either --omega (< 0)
or --eps (> 0), related by omega = -eps**2.  Tabular results go to stdout or
--out as CSV (default) or JSON (same columns as an array of records); all
numbers carry 12 significant digits, so identical invocations produce
byte-identical output.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from .bifurcation import find_bifurcation, trace_diagram
from .errors import BracketError, NumericsError
from .ksplit_states import (
    solve_ksplit_at_eps,
    solve_ksplit_opposite,
    solve_ksplit_same,
)
from .phase_plane import P_STAR
from .profiles_observables import reconstruct_profile
from .spectral import laplacian_spectrum, spectral_report
from .symmetric_state import solve_symmetric

__all__ = ["run", "main"]

_STATE_HEADER = ["branch", "K", "N", "omega", "eps", "p0", "mass", "energy"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1.

    The stock negative-number matcher rejects scientific notation, which
    frequencies like --omega -1e-6 need; widen it (none of the option names
    look like numbers, so this is unambiguous).
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(
            r"^-\d+$|^-\d*\.\d+$|^-\d+\.?\d*[eE][-+]?\d+$")

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value: float) -> str:
    return "%.12g" % value


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit(rows: list[dict], header: list[str], fmt: str,
          out: str | None) -> None:
    if fmt == "json":
        records = []
        for row in rows:
            record = {}
            for key in header:
                value = row[key]
                if isinstance(value, float):
                    record[key] = None if math.isnan(value) else \
                        float(_fmt(value))
                else:
                    record[key] = value
            records.append(record)
        _write(json.dumps(records, indent=2) + "\n", out)
        return
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            _fmt(row[key]) if isinstance(row[key], float) else str(row[key])
            for key in header))
    _write("\n".join(lines) + "\n", out)


def _state_row(state) -> dict:
    if hasattr(state, "k_big"):
        branch, k = state.regime, state.k_big
    else:
        branch, k = "symmetric", state.n_loops
    return {"branch": branch, "K": k, "N": state.n_loops,
            "omega": state.omega, "eps": state.eps, "p0": state.p0,
            "mass": state.mass, "energy": state.energy}


def _eps_from_args(args, parser: _Parser) -> float:
    if args.omega is not None:
        if args.omega >= 0.0:
            parser.error("--omega must be negative (omega = -eps**2)")
        return math.sqrt(-args.omega)
    return args.eps


def _add_output_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=None, metavar="PATH")


def _add_scale(sub: argparse.ArgumentParser, extra: str | None = None,
               required: bool = True) -> None:
    group = sub.add_mutually_exclusive_group(required=required)
    group.add_argument("--omega", type=float, default=None)
    group.add_argument("--eps", type=float, default=None)
    if extra == "p0":
        group.add_argument("--p0", type=float, default=None)


def _cmd_symmetric(args, parser) -> int:
    state = solve_symmetric(_eps_from_args(args, parser), args.n)
    _emit([_state_row(state)], _STATE_HEADER, args.format, args.out)
    return 0


def _cmd_ksplit(args, parser) -> int:
    if args.p0 is not None:
        if args.p0 < P_STAR:
            states = [solve_ksplit_opposite(args.p0, args.n, args.k)]
        else:
            states = solve_ksplit_same(args.p0, args.n, args.k)
    else:
        states = solve_ksplit_at_eps(_eps_from_args(args, parser), args.n,
                                     args.k, regime=args.regime)
    _emit([_state_row(s) for s in states], _STATE_HEADER, args.format,
          args.out)
    return 0


def _cmd_bifurcation(args, parser) -> int:
    report = find_bifurcation(args.n)
    if report is None:
        _write("null\n" if args.format == "json" else "no bifurcation\n",
               args.out)
        return 0
    row = {"N": report.n_loops, "p_bif": report.p_bif,
           "omega_star": report.omega_star, "eps_star": report.eps_star,
           "mu_star": report.mu_star, "p_star_star": report.p_star_star}
    _emit([row], list(row), args.format, args.out)
    return 0


def _cmd_diagram(args, parser) -> int:
    rows = trace_diagram(args.n, k_values=tuple(range(1, args.n)),
                         points=args.points)
    _emit([{"branch": r.branch, "K": r.k_big, "N": r.n_loops,
            "omega": r.omega, "eps": r.eps, "p0": r.p0, "mass": r.mass,
            "energy": r.energy} for r in rows],
          _STATE_HEADER, args.format, args.out)
    return 0


def _cmd_spectrum(args, parser) -> int:
    state = solve_symmetric(_eps_from_args(args, parser), args.n)
    report = spectral_report(state)
    rows = [{"kind": "gamma", "index": i, "lambda": g, "multiplicity": 1}
            for i, g in enumerate(report.gamma, start=1)]
    for n, beta in enumerate(report.beta, start=1):
        even = n % 2 == 1
        rows.append({"kind": "beta_even" if even else "beta_odd", "index": n,
                     "lambda": beta,
                     "multiplicity": args.n - 1 if even else args.n})
    _emit(rows, ["kind", "index", "lambda", "multiplicity"], args.format,
          args.out)
    return 0


def _cmd_laplacian(args, parser) -> int:
    rows = [{"lambda": value, "multiplicity": mult}
            for value, mult in laplacian_spectrum(args.n, args.count)]
    _emit(rows, ["lambda", "multiplicity"], args.format, args.out)
    return 0


def _cmd_profile(args, parser) -> int:
    eps = _eps_from_args(args, parser)
    if args.k is None:
        state = solve_symmetric(eps, args.n)
    else:
        states = solve_ksplit_at_eps(eps, args.n, args.k, regime=args.regime)
        if not states:
            raise BracketError(
                f"no K={args.k} {args.regime}-regime state at eps={_fmt(eps)}")
        state = states[0]
    prof = reconstruct_profile(state, samples=args.samples)
    rows = [{"edge_id": 0, "z": float(z), "u": float(u)}
            for z, u in zip(prof.tail.z, prof.tail.u)]
    for loop in prof.loops:
        rows.extend({"edge_id": loop.edge_id, "z": float(z), "u": float(u)}
                    for z, u in zip(loop.z, loop.u))
    _emit(rows, ["edge_id", "z", "u"], args.format, args.out)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="flowerwaves",
                     description="Standing waves on a flower graph: states, "
                                 "spectra, and bifurcation diagrams.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("symmetric", parents=[], help="symmetric state")
    sub.add_argument("--n", type=int, required=True)
    _add_scale(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_symmetric)

    sub = subs.add_parser("ksplit", help="asymmetric K-split states")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, required=True)
    _add_scale(sub, extra="p0")
    sub.add_argument("--regime", choices=("opposite", "same"),
                     default="opposite",
                     help="which regime to search when solving at a "
                          "frequency (with --p0 the side of p_* decides)")
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_ksplit)

    sub = subs.add_parser("bifurcation", help="symmetry-breaking point")
    sub.add_argument("--n", type=int, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_bifurcation)

    sub = subs.add_parser("diagram", help="bifurcation-diagram dataset")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--points", type=int, default=200)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_diagram)

    sub = subs.add_parser("spectrum", help="linearized spectrum at a "
                                           "symmetric state")
    sub.add_argument("--n", type=int, required=True)
    _add_scale(sub)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_spectrum)

    sub = subs.add_parser("laplacian", help="exact zero-potential spectrum")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--count", type=int, required=True)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_laplacian)

    sub = subs.add_parser("profile", help="sampled wave profile")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", type=int, default=None)
    _add_scale(sub)
    sub.add_argument("--regime", choices=("opposite", "same"),
                     default="opposite")
    sub.add_argument("--samples", type=int, default=2001)
    _add_output_options(sub)
    sub.set_defaults(handler=_cmd_profile)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValueError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"{parser.prog}: numerical failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
