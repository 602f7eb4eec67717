"""Command-line front end.

Exit codes: 0 when every analysed curve is ok, 2 when any curve was refused
(or, in batch mode, any line was malformed), 1 for usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .report import (
    AnalyzeOptions,
    CurveParseError,
    analyze,
    batch,
    dumps,
    parse_curve,
    render_text,
    summarize,
)

EXIT_OK, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sign(text):
    value = {"+1": 1, "1": 1, "-1": -1}.get(text.strip())
    if value is None:
        raise argparse.ArgumentTypeError(f"expected +1 or -1, got {text!r}")
    return value


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def build_parser():
    ap = _Parser(
        prog="paramodular-level",
        description="Level, Atkin-Lehner signs and spin Euler factors of the "
        "weight 3 paramodular sym^3 lift of an elliptic curve over Q.",
    )
    ap.add_argument("curve", nargs="?", help='Weierstrass coefficients "[a1,a2,a3,a4,a6]"')
    ap.add_argument("--label", help="free-text label carried into the output")
    ap.add_argument("--input", metavar="FILE", help="batch input file ('-' for stdin)")
    fmt = ap.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    mini = ap.add_mutually_exclusive_group()
    mini.add_argument("--minimize", action="store_true", help="replace the model by a global minimal one")
    mini.add_argument(
        "--assume-minimal",
        action="store_true",
        help="skip the minimality check (unsafe: results on a non-minimal model are wrong)",
    )
    ap.add_argument("--root-number-3", type=_sign, metavar="{+1,-1}", help="local root number w(E/Q_3)")
    ap.add_argument("--jobs", type=_positive, default=1, help="worker processes for batch mode")
    ap.set_defaults(fmt="text")
    return ap


def _emit(env, fmt, out):
    out.write((dumps(env.to_json()) if fmt == "json" else render_text(env)) + "\n")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if (args.curve is None) == (args.input is None):
        ap.error("give exactly one of a curve or --input FILE")
    options = AnalyzeOptions(args.minimize, args.assume_minimal, args.root_number_3)
    out = sys.stdout

    if args.curve is not None:
        try:
            spec = parse_curve(args.curve, args.label)
        except CurveParseError as exc:
            print(f"{ap.prog}: cannot parse curve: {exc}", file=sys.stderr)
            return EXIT_USAGE
        env = analyze(spec, options)
        _emit(env, args.fmt, out)
        return EXIT_OK if env.status == "ok" else EXIT_REFUSED

    try:
        if args.input == "-":
            lines = sys.stdin.readlines()
        else:
            with open(args.input, encoding="utf-8") as fh:
                lines = fh.readlines()
    except OSError as exc:
        print(f"{ap.prog}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    envelopes = batch(lines, options, args.jobs)
    for env in envelopes:
        _emit(env, args.fmt, out)
    counts = summarize(envelopes)
    if args.fmt == "json":
        out.write(dumps({"summary": counts}) + "\n")
    else:
        out.write("summary: " + " ".join(f"{k}={v}" for k, v in counts.items()) + "\n")
    return EXIT_OK if counts["ok"] == counts["total"] else EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
