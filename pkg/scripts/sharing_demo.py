#!/usr/bin/env python3
"""Print CM/IM verdicts and zero-pairing tables for a few function pairs."""

from __future__ import annotations

import argparse

from meroshift import parse, shares_value

PAIRS = [
    ("sin(z)", "2*sin(z)", "0"),
    ("sin(z)", "sin(z)^2", "0"),
    ("exp(z)", "exp(-z)", "1"),
    ("tan(z)", "1/cos(z)", "inf"),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=float, default=10.0)
    ap.add_argument("--table", action="store_true", help="show the pairing table for each pair")
    args = ap.parse_args(argv)
    for f, g, a in PAIRS:
        v = shares_value(parse(f), parse(g), a if a == "inf" else complex(a), args.r)
        print(f"f = {f}, g = {g}: {v.summary()}")
        if args.table:
            print(v.table())
            print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
