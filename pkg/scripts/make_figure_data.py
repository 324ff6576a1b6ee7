#!/usr/bin/env python3
"""Write the exceedance bound-curve datasets to CSV files.

Thin wrapper over the command line front end: one file per scale, with
the default study settings (level 4, drift 0.1, 200 orders on [3, 100])
unless overridden. The emitted rows are byte-identical to running
`renyibounds brownian-figures` directly.
"""

from __future__ import annotations

import argparse
import pathlib

from renyibounds.cli import main as cli_main


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="figure_data",
                        help="directory for the CSV files")
    parser.add_argument("--K", type=float, default=4.0)
    parser.add_argument("--mu", type=float, default=0.1)
    parser.add_argument("--alpha-min", type=float, default=3.0)
    parser.add_argument("--alpha-max", type=float, default=100.0)
    parser.add_argument("--points", type=int, default=200)
    args = parser.parse_args(argv)

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for scale in ("probability", "log"):
        target = out_dir / f"bounds_{scale}.csv"
        code = cli_main([
            "brownian-figures",
            "--K", repr(args.K),
            "--mu", repr(args.mu),
            "--alpha-min", repr(args.alpha_min),
            "--alpha-max", repr(args.alpha_max),
            "--points", str(args.points),
            "--scale", scale,
            "--format", "csv",
            "--output", str(target),
        ])
        if code != 0:
            return code
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
