"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failed.
Every subcommand accepts ``--json`` (canonical JSON on stdout), ``--tol``,
``--seed``, ``--quiet`` and ``--config FILE``; the config file is a JSON
object whose keys mirror the long flag names and act as defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .expr import Expr, to_text
from .nevanlinna import NevanlinnaError, RadialGrid, borel_estimate, characteristic, deficiency
from .operators import (
    ExprRecurrence,
    LinearDifferenceOperator,
    ResidualError,
    box_samples,
    delta_n,
    disk_samples,
    residual,
)
from .parse import ParseError, parse
from .poly import ComplexPoly
from .rational import NotPolynomial, PolynomialRecurrence, parse_poly, rational_solutions
from .roots import roots
from .serialize import dumps, format_complex, format_float, parse_complex
from .sharing import shares_value
from .solutions import PeriodicityError, SolutionError, build_general_solution, verify_general_solution
from .zeros import ZeroCountError

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for failed checks here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class JobConfig:
    command: str
    output: str = "text"
    tol: float | None = None
    seed: int | None = None
    quiet: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.output not in ("text", "json"):
            raise UsageError(f"unknown output format {self.output!r}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> JobConfig:
        skip = {"command", "json", "tol", "seed", "quiet", "config", "handler"}
        params = {k: v for k, v in vars(args).items() if k not in skip}
        return cls(args.command, "json" if args.json else "text", args.tol, args.seed, args.quiet, params)


# ----------------------------------------------------------------------------
# argument helpers


def _split(text: str, sep: str = ",") -> list[str]:
    return [t.strip() for t in text.split(sep) if t.strip()]


def parse_operator_spec(spec: str) -> LinearDifferenceOperator:
    """``delta:c=1,n=2`` for a forward difference, ``coeffs:a0,a1,...;c=1`` otherwise."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "delta":
        opts = dict(item.split("=", 1) for item in _split(rest))
        unknown = set(opts) - {"c", "n"}
        if unknown:
            raise UsageError(f"unknown delta option(s): {', '.join(sorted(unknown))}")
        n = int(opts.get("n", "1"))
        return delta_n(parse_complex(opts.get("c", "1")), n)
    if kind == "coeffs":
        body, _, tail = rest.partition(";")
        c = parse_complex(tail.split("=", 1)[1]) if tail.strip() else 1
        return LinearDifferenceOperator(c, tuple(parse_complex(a) for a in _split(body)))
    raise UsageError(f"unknown operator kind {kind!r} (use delta:... or coeffs:...)")


def _operator(args) -> LinearDifferenceOperator:
    if args.op and args.coeffs:
        raise UsageError("give either --op or --coeffs, not both")
    if args.op:
        return parse_operator_spec(args.op)
    if args.coeffs:
        return LinearDifferenceOperator(parse_complex(args.c), tuple(parse_complex(a) for a in _split(args.coeffs)))
    raise UsageError("an operator is required (--op or --coeffs)")


def _samples(args) -> np.ndarray:
    if getattr(args, "box", None):
        parts = [float(x) for x in _split(args.box)]
        if len(parts) != 4:
            raise UsageError("--box takes re0,re1,im0,im1")
        if args.seed is not None:
            rng = np.random.default_rng(args.seed)
            return rng.uniform(parts[0], parts[1], args.samples) + 1j * rng.uniform(parts[2], parts[3], args.samples)
        return box_samples(args.samples, (parts[0], parts[1]), (parts[2], parts[3]))
    if args.seed is not None:
        rng = np.random.default_rng(args.seed)
        rad = args.radius * np.sqrt(rng.uniform(0, 1, args.samples))
        return rad * np.exp(2j * np.pi * rng.uniform(0, 1, args.samples))
    return disk_samples(args.samples, args.radius)


def _expr_or_poly(obj) -> Expr:
    if isinstance(obj, list):
        return parse_poly(obj).to_expr()
    return parse(str(obj))


def load_recurrence_file(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def expr_recurrence(d: dict) -> ExprRecurrence:
    """Recurrence with expression (or coefficient-list) entries, for residual checks."""
    return ExprRecurrence(
        tuple(_expr_or_poly(b) for b in d["coeffs"]),
        _expr_or_poly(d.get("rhs", "0")),
        parse_complex(d.get("step", "1")),
    )


def _emit(cfg: JobConfig, payload: dict, text: str) -> None:
    if cfg.quiet:
        return
    if cfg.output == "json":
        print(dumps(payload))
    else:
        print(text)


def _residual_lines(rep) -> list[str]:
    lines = [
        f"samples: {rep.samples} ({len(rep.skipped)} skipped near poles)",
        f"max |residual|: {format_float(rep.max_abs)}",
        f"max relative residual: {format_float(rep.max_rel)}  (relative to {rep.denominator})",
    ]
    if rep.worst_point is not None:
        lines.append(f"worst sample: {format_complex(rep.worst_point)}")
    return lines


# ----------------------------------------------------------------------------
# subcommands


def cmd_solve_eigen(args, cfg: JobConfig) -> int:
    op = _operator(args)
    A = parse_complex(args.A)
    gs = build_general_solution(op, A, generic=args.generic, cluster_tol=args.cluster_tol)
    tol = cfg.tol if cfg.tol is not None else 1e-9
    rep = verify_general_solution(gs, _samples(args))
    ok = rep.passed(tol)
    payload = {"solution": gs.to_dict(), "residual": rep.to_dict(), "tol": tol, "passed": ok}
    lines = [f"operator: shift {format_complex(op.shift)}, coefficients {', '.join(format_complex(a) for a in op.coeffs)}"]
    lines.append(f"A = {format_complex(A)}")
    lines.append("characteristic roots:")
    for r in gs.roots.sorted():
        lines.append(f"  {format_complex(r.value)}  (multiplicity {r.multiplicity})")
    lines.append(f"solution: f(z) = {gs.describe()}   (pi: any c-periodic meromorphic function)")
    lines.extend(f"note: {d}" for d in gs.diagnostics)
    lines.extend(_residual_lines(rep))
    lines.append(f"residual check (tol {format_float(tol)}): {'PASS' if ok else 'FAIL'}")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_residual(args, cfg: JobConfig) -> int:
    f = parse(args.f)
    tol = cfg.tol if cfg.tol is not None else 1e-9
    zs = _samples(args)
    if args.recurrence or args.rec_coeffs:
        if args.recurrence:
            d = load_recurrence_file(args.recurrence)
        else:
            d = {"coeffs": _split(args.rec_coeffs, ";"), "rhs": args.rhs, "step": args.step}
        rec = expr_recurrence(d)
        rep = rec.residual(f, zs, args.pole_radius)
        what = {"recurrence": {"coeffs": [to_text(b) for b in rec.coeffs], "rhs": to_text(rec.rhs), "step": format_complex(rec.step)}}
    else:
        op = _operator(args)
        A = parse_complex(args.A)
        rep = residual(op, f, A, zs, args.pole_radius)
        what = {"operator": op.to_dict(), "A": format_complex(A)}
    ok = rep.passed(tol)
    payload = {"f": to_text(f), **what, "residual": rep.to_dict(), "tol": tol, "passed": ok}
    lines = [f"f(z) = {to_text(f)}", *_residual_lines(rep)]
    lines.append(f"verdict (tol {format_float(tol)}): {'PASS' if ok else 'FAIL: nonzero residual, the candidate does not solve the equation'}")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_nevanlinna(args, cfg: JobConfig) -> int:
    f = parse(args.f)
    if not 0 < args.rmin < args.rmax:
        raise UsageError("radii must satisfy 0 < rmin < rmax")
    grid = RadialGrid.geometric(args.rmin, args.rmax, args.count, args.nodes)
    rep = characteristic(f, grid)
    borel = []
    for a in args.deficiency or []:
        deficiency(f, a if a.strip().lower() in ("inf", "infinity") else parse_complex(a), grid, rep)
    for a in args.borel or []:
        borel.append(borel_estimate(f, parse_complex(a), grid, rep))
    if args.csv:
        Path(args.csv).write_text(rep.to_csv())
    payload = {"f": to_text(f), "report": rep.to_dict(), "borel": [b.to_dict() for b in borel]}
    lines = [f"f(z) = {to_text(f)}", f"{'r':>10} {'m(r,f)':>14} {'N(r,f)':>14} {'T(r,f)':>14}"]
    for r, m, N, T in zip(rep.radii, rep.m, rep.N, rep.T):
        lines.append(f"{r:10.4g} {m:14.6g} {N:14.6g} {T:14.6g}")
    lines.append(f"order estimate: {rep.order_text}  ({rep.growth_model})")
    lines.append(f"hyper-order estimate: {rep.hyper_order:.4g}")
    for a, d in rep.deficiency.items():
        lines.append(f"deficiency estimate at {a}: {d:.4g}")
    for b in borel:
        lines.append(f"Borel at {b.value}: lambda = {b.lam:.4g}, order = {b.order:.4g} -> {b.verdict}")
    lines.extend(f"flag: {x}" for x in rep.flags)
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK


def cmd_share(args, cfg: JobConfig) -> int:
    f, g = parse(args.f), parse(args.g)
    a = args.a if args.a.strip().lower() in ("inf", "infinity") else parse_complex(args.a)
    pair_tol = cfg.tol if cfg.tol is not None else 1e-6
    v = shares_value(f, g, a, args.r, pair_tol)
    payload = {"f": to_text(f), "g": to_text(g), "verdict": v.to_dict()}
    lines = [v.summary()]
    if args.table:
        lines.append(v.table())
    lines.extend(f"note: {d}" for d in v.diagnostics)
    _emit(cfg, payload, "\n".join(lines))
    if args.expect == "cm" and not v.cm or args.expect == "im" and not v.im:
        return EXIT_FAILED
    return EXIT_OK


def cmd_rational(args, cfg: JobConfig) -> int:
    if args.file:
        rec = PolynomialRecurrence.from_dict(load_recurrence_file(args.file))
    elif args.rec_coeffs:
        rec = PolynomialRecurrence(tuple(parse_poly(b) for b in _split(args.rec_coeffs, ";")), parse_poly(args.rhs), args.step)
    else:
        raise UsageError("give --file or --rec-coeffs")
    sol = rational_solutions(rec)
    _emit(cfg, sol.to_dict(), sol.summary())
    return EXIT_OK if sol.verified else EXIT_FAILED


def cmd_roots(args, cfg: JobConfig) -> int:
    coeffs = [parse_complex(a) for a in _split(args.coeffs)]
    p = ComplexPoly(coeffs)
    if p.degree < 1:
        raise UsageError("need a polynomial of degree at least 1")
    rs = roots(p, cluster_tol=args.cluster_tol).sorted()
    payload = {
        "coeffs": [format_complex(c) for c in coeffs],
        "roots": [{"root": format_complex(r.value), "multiplicity": r.multiplicity} for r in rs],
        "converged": rs.converged,
        "diagnostics": list(rs.diagnostics),
    }
    lines = [f"{format_complex(r.value)}  (multiplicity {r.multiplicity})" for r in rs]
    lines.extend(f"note: {d}" for d in rs.diagnostics)
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK if rs.converged else EXIT_FAILED


# ----------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="canonical JSON output")
    p.add_argument("--tol", type=float, default=None, help="pass/fail tolerance")
    p.add_argument("--seed", type=int, default=None, help="random sample points instead of the fixed spiral")
    p.add_argument("--quiet", action="store_true", help="print nothing; rely on the exit code")
    p.add_argument("--config", default=None, help="JSON file of flag defaults")
    return p


def _operator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--op", help="operator spec, e.g. delta:c=1,n=2 or coeffs:-1,1;c=2")
    p.add_argument("--coeffs", help="a_0,...,a_n of sum_j a_j f(z+jc) (use --coeffs=-1,1 for a leading minus)")
    p.add_argument("--c", default="1", help="shift for --coeffs")
    p.add_argument("--A", default="1", help="eigenvalue A")


def _sample_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--radius", type=float, default=5.0, help="sample disk radius")
    p.add_argument("--box", help="sample box re0,re1,im0,im1 instead of a disk")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="meroshift", description="Difference-operator eigen-solutions and value-distribution checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve-eigen", parents=[common], help="general solution of L(f) = A f")
    _operator_flags(p)
    _sample_flags(p)
    p.add_argument("--generic", action="store_true", help="allow A = 0 (homogeneous L(f) = 0)")
    p.add_argument("--cluster-tol", type=float, default=1e-6)
    p.set_defaults(handler=cmd_solve_eigen)

    p = sub.add_parser("residual", parents=[common], help="check a candidate solution pointwise")
    p.add_argument("--f", required=True, help="candidate f(z)")
    _operator_flags(p)
    _sample_flags(p)
    p.add_argument("--recurrence", help="JSON recurrence file {coeffs, rhs, step}")
    p.add_argument("--rec-coeffs", help="b_0;b_1;...;b_n as expressions in z")
    p.add_argument("--rhs", default="0")
    p.add_argument("--step", default="1")
    p.add_argument("--pole-radius", type=float, default=1e-3)
    p.set_defaults(handler=cmd_residual)

    p = sub.add_parser("nevanlinna", parents=[common], help="m, N, T and growth estimates")
    p.add_argument("--f", required=True)
    p.add_argument("--rmin", type=float, default=5.0)
    p.add_argument("--rmax", type=float, default=200.0)
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--nodes", type=int, default=512)
    p.add_argument("--deficiency", action="append", help="value a for a deficiency estimate (repeatable; 'inf' allowed)")
    p.add_argument("--borel", action="append", help="value a for a Borel-exceptional check (repeatable)")
    p.add_argument("--csv", help="write the r, m, N, T table to this file")
    p.set_defaults(handler=cmd_nevanlinna)

    p = sub.add_parser("share", parents=[common], help="CM/IM sharing of a value in a disk")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--a", default="0", help="shared value ('inf' compares poles)")
    p.add_argument("--r", type=float, default=10.0)
    p.add_argument("--table", action="store_true", help="print the zero pairing table")
    p.add_argument("--expect", choices=("cm", "im"), help="exit 2 unless this sharing holds")
    p.set_defaults(handler=cmd_share)

    p = sub.add_parser("rational", parents=[common], help="exact rational solutions of a polynomial recurrence")
    p.add_argument("--file", help="JSON recurrence file")
    p.add_argument("--rec-coeffs", help="b_0;b_1;...;b_n as polynomials in z")
    p.add_argument("--rhs", default="0")
    p.add_argument("--step", default="1")
    p.set_defaults(handler=cmd_rational)

    p = sub.add_parser("roots", parents=[common], help="roots of a polynomial with multiplicities")
    p.add_argument("--coeffs", required=True, help="ascending coefficients c_0,...,c_n")
    p.add_argument("--cluster-tol", type=float, default=1e-6)
    p.set_defaults(handler=cmd_roots)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in cfg.items()}
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        cfg = JobConfig.from_args(args)
        return args.handler(args, cfg)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ResidualError, ZeroCountError, NevanlinnaError) as exc:
        print(f"meroshift: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (UsageError, ParseError, NotPolynomial, SolutionError, PeriodicityError, ValueError, KeyError, OSError) as exc:
        # ResidualError is a ValueError, so it must be caught above
        print(f"meroshift: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
