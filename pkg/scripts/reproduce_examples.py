#!/usr/bin/env python3
"""Recompute the worked examples and print one row per identity.

Each row shows the residual of a candidate solution.  It ends in ``ok`` when
the identity holds at 1e-9, or ``REJECTED`` when the candidate fails.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
from pathlib import Path

from meroshift import ExprRecurrence, delta_n, parse, rational_solutions, residual
from meroshift.operators import box_samples
from meroshift.rational import PolynomialRecurrence

RECURRENCES = Path(__file__).resolve().parents[1] / "recurrences"
OMEGA = cmath.exp(2j * math.pi / 3)


def eigen_rows():
    w = f"({OMEGA.real!r}+{OMEGA.imag!r}*i)"
    f = parse(f"exp(z*log(5)/{w})*exp(2*pi*i*z/{w})")
    yield "Delta_w f = 4 f", residual(delta_n(OMEGA, 1), f, 4).max_rel
    A = math.pi**math.pi - 1
    for name in ("sin", "cos"):
        g = parse(f"exp(z*pi*log(pi)/i)*{name}(2*pi*z/i)")
        yield f"Delta_i f = (pi^pi - 1) f, {name}", residual(delta_n(1j, 1), g, A).max_rel


def recurrence_rows():
    cases = [
        ("tan_homogeneous.json", "tan(pi*z)", None),
        ("tan_inhomogeneous.json", "tan(pi*z)+z", None),
        ("gamma.json", "gamma(z)", box_samples(100, (1, 6), (-3, 3))),
        ("claimed_exp.json", "exp(z)", None),
        ("claimed_exp_plus_one.json", "exp(z)+1", None),
        ("claimed_gaussian.json", "exp((z^2-1)/2)", None),
    ]
    for file, cand, samples in cases:
        data = json.loads((RECURRENCES / file).read_text())
        rec = ExprRecurrence(tuple(parse(c) for c in data["coeffs"]), parse(str(data.get("rhs", "0"))))
        yield f"{file}: f = {cand}", rec.residual(parse(cand), samples).max_rel


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args(argv)
    for label, res in [*eigen_rows(), *recurrence_rows()]:
        print(f"{label:<48} {res:10.3e}  {'ok' if res < args.tol else 'REJECTED'}")
    rec = PolynomialRecurrence.from_dict(json.loads((RECURRENCES / "shifted_quadratic.json").read_text()))
    print()
    print(rational_solutions(rec).summary())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
