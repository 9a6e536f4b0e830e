#!/usr/bin/env python3
"""Tabulate m, N and T on a radial grid for a batch of functions.

Writes one CSV per function plus ``summary.json`` (order, hyper-order and
growth model) into the output directory, ready for external plotting.
"""

from __future__ import annotations

import argparse
import json
import re
from pathlib import Path

from meroshift import RadialGrid, characteristic, parse

DEFAULT_FUNCTIONS = ["exp(z)", "exp(z^2)", "sin(z)", "tan(z)", "(z^2+1)/(z-1)", "gamma(z)", "exp(exp(z))"]


def slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("functions", nargs="*", default=DEFAULT_FUNCTIONS)
    ap.add_argument("--out", type=Path, default=Path("nevanlinna_out"))
    ap.add_argument("--rmin", type=float, default=5.0)
    ap.add_argument("--rmax", type=float, default=200.0)
    ap.add_argument("--count", type=int, default=12)
    args = ap.parse_args(argv)

    grid = RadialGrid.geometric(args.rmin, args.rmax, args.count)
    args.out.mkdir(parents=True, exist_ok=True)
    summary = {}
    for text in args.functions:
        rep = characteristic(parse(text), grid)
        (args.out / f"{slug(text)}.csv").write_text(rep.to_csv())
        summary[text] = {"order": rep.order_text, "hyper_order": rep.hyper_order, "model": rep.growth_model, "flags": rep.flags}
        print(f"{text:<18} order {rep.order_text:>8}  T(r_max) {rep.T[-1]:12.5g}  {rep.growth_model}")
    (args.out / "summary.json").write_text(json.dumps(summary, indent=2, default=str) + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
