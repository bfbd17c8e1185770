"""Command line: render solver artifacts into image files.

    shockplot contours <field.csv> [--sidecar <spec.json>] -o out.png
    shockplot phase <trace.csv> [<trace.csv> ...] -o out.png
    shockplot residuals <history.csv> [<history.csv> ...] -o out.png
"""

from __future__ import annotations

import argparse
import sys

from .figures import plot_contours, plot_phase_portrait, plot_residuals


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="shockplot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_c = sub.add_parser("contours", help="density/pressure/Mach contours from a field snapshot")
    p_c.add_argument("field")
    p_c.add_argument("--sidecar", default=None, help="contour-spec JSON (default: <field>.contours.json)")
    p_c.add_argument("-o", "--output", required=True)

    p_p = sub.add_parser("phase", help="phase portrait from analyze traces")
    p_p.add_argument("traces", nargs="+")
    p_p.add_argument("-o", "--output", required=True)

    p_r = sub.add_parser("residuals", help="residual history plot")
    p_r.add_argument("histories", nargs="+")
    p_r.add_argument("-o", "--output", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "contours":
            plot_contours(args.field, args.output, args.sidecar)
        elif args.command == "phase":
            plot_phase_portrait(args.traces, args.output)
        else:
            plot_residuals(args.histories, args.output)
    except (OSError, ValueError) as err:
        print(f"shockplot: {err}", file=sys.stderr)
        return 1
    print(f"shockplot: wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
