#!/usr/bin/env python3
"""Solve every polynomial recurrence file in a directory exactly.

Files whose coefficients are not polynomials (exp, e, ...) are skipped with
a note.  Exit status 2 if any exact certificate fails.
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from meroshift.rational import NotPolynomial, PolynomialRecurrence, rational_solutions


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", type=Path, nargs="?", default=Path(__file__).resolve().parents[1] / "recurrences")
    args = ap.parse_args(argv)
    failed = False
    for path in sorted(args.directory.glob("*.json")):
        try:
            rec = PolynomialRecurrence.from_dict(json.loads(path.read_text()))
        except (NotPolynomial, ValueError) as exc:
            print(f"== {path.name}: skipped ({exc})")
            continue
        t0 = time.perf_counter()
        sol = rational_solutions(rec)
        print(f"== {path.name} ({(time.perf_counter() - t0) * 1e3:.1f} ms)")
        print(sol.summary())
        failed |= not sol.verified
    return 2 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
