#!/usr/bin/env python3
"""Crosstalk envelope sweeps: |g|^2 cos^{2n}(2 theta) vs |beta|^2 per angle and shape."""

import sys

from .plot_phase_noise import render
from .rendering import build_parser, load_inputs


def main(argv=None) -> int:
    args = build_parser(__doc__).parse_args(argv)
    artifacts = load_inputs(args)
    if len(artifacts) != 1:
        raise SystemExit("expected exactly one noise.csv input")
    render(artifacts[0], args.out, args.dpi, angle_column="theta_deg", angle_symbol=r"$\theta$")
    return 0


if __name__ == "__main__":
    sys.exit(main())
