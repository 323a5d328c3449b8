"""Command-line interface: ``qcorr {analyze,sweep,xxz,verify,plot}``.

Exit codes: 0 success, 1 usage error, 2 unphysical input, 3 solver
failure, 4 verification failure.
"""

import argparse
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from qcorr import audit, families, plotting, xxz
from qcorr import geometric as geo
from qcorr.core import UnphysicalStateError

EXIT_OK, EXIT_USAGE, EXIT_UNPHYSICAL, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ["x", "c1", "c2", "c3", "physical", "QE", "CE", "TE", "QG", "CG", "TG"]
XXZ_COLUMNS = [
    "delta", "L", "energy_density", "Gxx", "Gyy", "Gzz", "c1", "c2", "c3",
    "QG", "CG", "TG", "QE", "CE", "TE", "degeneracy", "status",
]
SWEEP_PLOT = {"su2": ["TE", "TG"], "u1": ["TE", "TG"], "custom-line": list(families.MEASURES)}
XXZ_PLOT = ["QG", "CG", "TG"]


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def number(text):
    """A real number; fractions such as ``1/3`` are accepted."""
    try:
        return float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value + 0.0:.12g}"
    return str(value)


def to_csv(columns, rows):
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(row.get(k)) for k in columns) + "\n")
    return buf.getvalue()


def emit(text, output):
    if output:
        Path(output).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def plot_path(args, default_stem):
    if args.plot_out:
        return args.plot_out
    if args.output:
        return str(Path(args.output).with_suffix(".svg"))
    return default_stem + ".svg"


# -- subcommands -------------------------------------------------------------


def cmd_analyze(args):
    try:
        report = geo.analyze((args.c1, args.c2, args.c3), verify=args.verify)
    except UnphysicalStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except geo.InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    d = report.as_dict()
    if args.format == "json":
        emit(json.dumps(d, indent=2) + "\n", args.output)
        return EXIT_OK
    spec = "  ".join(f"{k}={fmt(v)}" for k, v in d["spectrum"].items())
    lines = [
        "c = (" + ", ".join(fmt(x) for x in d["c"]) + ")",
        f"spectrum: {spec}",
        "entropic:  QE={}  CE={}  TE={}".format(*(fmt(d[k]) for k in ("QE", "CE", "TE"))),
        "geometric: QG={}  CG={}  TG={}".format(*(fmt(d[k]) for k in ("QG", "CG", "TG"))),
        f"optimal_axis = {d['optimal_axis']}",
    ]
    emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_sweep(args):
    lo, hi = args.range if args.range else families.DOMAINS[args.family]
    if args.family == "custom-line" and (args.start is None or args.end is None):
        raise UsageError("custom-line needs --start and --end")
    try:
        rows = families.sweep_family(args.family, lo, hi, args.steps, args.start, args.end)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "json":
        emit(json.dumps(rows, indent=2) + "\n", args.output)
    else:
        emit(to_csv(SWEEP_COLUMNS, rows), args.output)
    if args.plot:
        x = [r["x"] for r in rows]
        series = {k: [r[k] if r[k] is not None else float("nan") for r in rows] for k in SWEEP_PLOT[args.family]}
        plotting.line_plot(x, series, plot_path(args, f"sweep_{args.family}"), xlabel="x")
    return EXIT_OK


def _xxz_row(L, r):
    row = {"delta": r.delta, "L": L, "status": r.status}
    if r.status == "ok":
        o, d = r.observables, r.report.as_dict()
        row.update(
            energy_density=o.energy_density, Gxx=o.g_xx, Gyy=o.g_yy, Gzz=o.g_zz,
            c1=r.c.c1, c2=r.c.c2, c3=r.c.c3, degeneracy=o.degeneracy,
        )
        row.update({k: float(d[k]) for k in families.MEASURES})
    return row


def cmd_xxz(args):
    lo, hi = args.range
    try:
        xxz.ChainSpec(args.L, lo)
        if args.steps == 1 and lo == hi:
            rows = [xxz._solve_row(args.L, lo)]
        elif lo >= hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        else:
            rows = xxz.sweep_delta(args.L, lo, hi, args.steps, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))
    table = [_xxz_row(args.L, r) for r in rows]
    if args.format == "json":
        emit(json.dumps(table, indent=2) + "\n", args.output)
    else:
        emit(to_csv(XXZ_COLUMNS, table), args.output)

    summary_stream = sys.stderr if not args.output and args.format == "csv" else sys.stdout
    solved = [r for r in rows if r.status == "ok"]
    print("# transitions", file=summary_stream)
    if len(solved) >= 5:
        for t in xxz.detect_transitions(rows, jump_threshold=args.jump_threshold):
            print(f"{t.kind} delta={t.delta:.9f} bracket=[{t.lo:.9f}, {t.hi:.9f}]", file=summary_stream)
    else:
        print("(fewer than 5 solved rows; detection skipped)", file=summary_stream)

    if args.plot:
        x = [r["delta"] for r in table]
        series = {k: [r.get(k, float("nan")) for r in table] for k in XXZ_PLOT}
        plotting.line_plot(x, series, plot_path(args, f"xxz_L{args.L}"), xlabel="Delta")

    failed = [r for r in rows if r.status != "ok"]
    for r in failed:
        print(f"row delta={r.delta!r}: {r.status}", file=sys.stderr)
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_verify(args):
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    report = audit.run_verification(args.seed, args.count)
    emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
    if not report["passed"]:
        bad = [name for name, s in sorted(report["suites"].items()) if s["failed"]]
        print("verification failed: " + ", ".join(bad), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_plot(args):
    columns = [c.strip() for c in args.y.split(",") if c.strip()]
    try:
        plotting.plot_csv(args.csv, args.x, columns, args.output, title=args.title)
    except (KeyError, FileNotFoundError) as exc:
        raise UsageError(str(exc).strip("'\""))
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser():
    parser = Parser(prog="qcorr", description="Correlation measures for Bell-diagonal states.")
    parser.add_argument("--config", help="key=value file supplying defaults for any flag")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    def outputs(p, formats=("csv", "json")):
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=formats, default=formats[0])

    p = sub.add_parser("analyze", help="all six measures for one state")
    for name in ("c1", "c2", "c3"):
        p.add_argument(name, type=number)
    p.add_argument("--verify", action="store_true", help="cross-check closed forms against matrices")
    outputs(p, ("text", "json"))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="measures along a one-parameter family")
    p.add_argument("--family", choices=sorted(families.DOMAINS), default="su2")
    p.add_argument("--range", nargs=2, type=number, metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--start", nargs=3, type=number, metavar=("C1", "C2", "C3"))
    p.add_argument("--end", nargs=3, type=number, metavar=("C1", "C2", "C3"))
    p.add_argument("--plot", action="store_true", help="also write an SVG next to the output")
    p.add_argument("--plot-out", help="SVG path (default: output path with .svg)")
    outputs(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("xxz", help="ground-state correlations of the XXZ ring")
    p.add_argument("-L", "--L", type=int, default=8, dest="L")
    p.add_argument("--range", nargs=2, type=number, default=[-1.5, 1.5], metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--workers", type=int, default=None, help="threads (default: QCORR_THREADS or CPU count)")
    p.add_argument("--jump-threshold", type=float, default=0.1)
    p.add_argument("--plot", action="store_true")
    p.add_argument("--plot-out")
    outputs(p)
    p.set_defaults(func=cmd_xxz)

    p = sub.add_parser("verify", help="randomized audits and oracle checks (JSON report)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render CSV columns to SVG")
    p.add_argument("csv")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True, help="comma-separated column names")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _convert(action, value):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        return value.lower() in ("1", "true", "yes", "on")
    conv = action.type or str
    if action.nargs not in (None, "?"):
        return [conv(v) for v in value.replace(",", " ").split()]
    return conv(value)


def apply_config(parser, argv, config):
    """Install config values as subcommand defaults, so explicit flags still win."""
    command = next((a for a in argv if not a.startswith("-") and a in _subparsers(parser)), None)
    if command is None:
        return
    sub = _subparsers(parser)[command]
    defaults = {}
    for action in sub._actions:
        if action.dest in config:
            try:
                defaults[action.dest] = _convert(action, config[action.dest])
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {action.dest}: {exc}")
            action.required = False
    sub.set_defaults(**defaults)


def _subparsers(parser):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices
    return {}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre_parser = argparse.ArgumentParser(add_help=False)
    pre_parser.add_argument("--config")
    pre, _ = pre_parser.parse_known_args(argv)
    try:
        if pre.config:
            apply_config(parser, argv, read_config(pre.config))
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code
    except (UsageError, OSError) as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except xxz.SolverError as exc:
        print(f"qcorr: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
