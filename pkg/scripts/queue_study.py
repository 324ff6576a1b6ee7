#!/usr/bin/env python3
"""Run the queue overflow study end to end.

Thin wrapper over the command line front end: computes the large
deviation decay rate for the slotted queue, simulates the overflow
probability under the nominal and alternative arrival rates, and
reports whether the alternative estimate lands inside the two-sided
bound built from the nominal confidence interval. Exits 1 when the
sandwich check fails, matching the CLI contract.
"""

from __future__ import annotations

import argparse

from renyibounds.cli import main as cli_main


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--C", type=float, default=2.0,
                        help="service capacity per step")
    parser.add_argument("--b", type=float, default=0.1,
                        help="overflow level per step")
    parser.add_argument("--n", type=int, default=50,
                        help="horizon length in steps")
    parser.add_argument("--alpha", type=float, default=3.0)
    parser.add_argument("--nominal-rate", type=float, default=1.0)
    parser.add_argument("--theta-rate", type=float, default=1.1)
    parser.add_argument("--reps", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", default=None,
                        help="write the JSON report here instead of stdout")
    args = parser.parse_args(argv)

    cli_argv = [
        "queue",
        "--C", repr(args.C),
        "--b", repr(args.b),
        "--n", str(args.n),
        "--alpha", repr(args.alpha),
        "--nominal-rate", repr(args.nominal_rate),
        "--theta-rate", repr(args.theta_rate),
        "--reps", str(args.reps),
        "--seed", str(args.seed),
        "--format", "json",
    ]
    if args.output is not None:
        cli_argv += ["--output", args.output]
    return cli_main(cli_argv)


if __name__ == "__main__":
    raise SystemExit(main())
