"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 fit divergence,
4 domain error, 5 solver failure. Data goes to stdout, diagnostics to stderr.
"""

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import device, sizing
from .cfia import load_measured, load_plan, size_cfia
from .errors import Diverged, SizerError, UsageError
from .kinds import DeviceKind
from .models import eval_ro, eval_ucox, eval_vth, get_family, load_bundle
from .models.reference import default_bundle
from .numeric import FitProblem, gauss_newton_fit, pearson
from .textfmt import fmt_float

DEFAULT_BUNDLE = "bundles/paper-0p18um.mdl"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    text = text.strip()
    if not text:
        return []
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(text):
    """Comma list, or ``lin:start:stop:n`` / ``geom:start:stop:n``."""
    parts = text.split(":")
    if len(parts) == 4 and parts[0] in ("lin", "geom"):
        try:
            a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
        fn = np.linspace if parts[0] == "lin" else np.geomspace
        return fn(a, b, n).tolist()
    return _floats(text)


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _kind(text):
    try:
        return DeviceKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class Output:
    def __init__(self, stream, fmt, precision, err=None):
        self.stream = stream
        self.err = err or sys.stderr
        self.fmt = fmt
        self.precision = precision

    def num(self, x):
        return f"{x:.{self.precision}e}"

    def field(self, key, value, unit=""):
        if isinstance(value, float):
            value = self.num(value)
        if self.fmt == "csv":
            self.stream.write(f"{key},{value}\n")
        else:
            suffix = f" {unit}" if unit else ""
            self.stream.write(f"{key} = {value}{suffix}\n")

    def line(self, text):
        self.stream.write(text + "\n")

    def note(self, text):
        self.err.write(text + "\n")


def _bundle(args):
    if args.bundle is None:
        path = Path(DEFAULT_BUNDLE)
        return load_bundle(path) if path.is_file() else default_bundle()
    path = Path(args.bundle)
    if not path.is_file():
        raise UsageError(f"bundle file not found: {path}")
    return load_bundle(path)


def cmd_fit(args, out):
    family = get_family(args.family)
    if args.max_iter < 1:
        raise UsageError("--max-iter must be >= 1")
    if len(args.init) != family.n_params:
        raise UsageError(f"{family.code} expects {family.n_params} initial coefficients, got {len(args.init)}")
    path = Path(args.data)
    if not path.is_file():
        raise UsageError(f"data file not found: {path}")
    xs, ys = [], []
    with path.open(encoding="utf-8") as fh:
        for n, rec in enumerate(csv.reader(fh), start=1):
            if not rec or rec[0].lstrip().startswith("#"):
                continue
            try:
                x, y = float(rec[0]), float(rec[1])
            except (ValueError, IndexError):
                if n == 1:
                    continue  # header
                raise UsageError(f"{path}: line {n}: expected two numbers") from None
            xs.append(x)
            ys.append(y)
    try:
        problem = FitProblem(xs, ys, args.init, tol=args.tol, max_iter=args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = gauss_newton_fit(family, problem)
    out.field("theta", ",".join(fmt_float(t) for t in result.theta))
    out.field("sse", result.sse)
    out.field("iterations", result.iterations)
    out.field("converged", str(result.converged).lower())
    if not result.converged:
        raise Diverged("iteration cap reached before convergence")
    return 0


def cmd_eval(args, out):
    bundle = _bundle(args)
    if args.quantity == "ro":
        value, unit = eval_ro(bundle, args.device, args.l), "ohm"
    else:
        if args.w is None:
            raise UsageError(f"--w is required for {args.quantity}")
        fn = eval_vth if args.quantity == "vth" else eval_ucox
        value = fn(bundle, args.device, args.w, args.l)
        unit = "V" if args.quantity == "vth" else "A/V^2"
    out.field(args.quantity, value, unit)
    return 0


def _request(args):
    pins = sizing.Pins(args.pin_ucox, args.pin_vth, args.pin_ro)
    return sizing.SizingRequest(args.device, args.id, abs(args.vgs), abs(args.vds), args.l, pins)


def cmd_size(args, out):
    bundle = _bundle(args)
    r = sizing.predict_width(bundle, _request(args))
    out.field("w", r.w, "m")
    out.field("vth", r.vth, "V")
    out.field("ucox", r.ucox, "A/V^2")
    out.field("ro", r.ro, "ohm")
    out.field("i_a", r.split.i_a, "A")
    out.field("i_p", r.split.i_p, "A")
    out.field("region", r.region.value)
    out.field("iterations", r.iterations)
    out.field("method", r.method)
    return 0


def cmd_sweep(args, out):
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not args.w_min < args.w_max:
        raise UsageError("--w-min must be below --w-max")
    bundle = _bundle(args)
    sw = sizing.brute_force_width(bundle, args.device, args.id, abs(args.vgs), abs(args.vds),
                                  args.l, args.w_min, args.w_max, args.steps)
    out.line("w_m,id_a")
    for w, i in sw.samples:
        out.line(f"{out.num(w)},{out.num(i)}")
    out.line(f"best_w,{out.num(sw.best_w)}")
    if sw.range_saturated:
        out.note("warning: target lies outside the swept current range")
    return 0


def cmd_cfia(args, out):
    plan_path = Path(args.plan)
    if not plan_path.is_file():
        raise UsageError(f"plan file not found: {plan_path}")
    measured = None
    if args.measured:
        if not Path(args.measured).is_file():
            raise UsageError(f"measured file not found: {args.measured}")
        measured = load_measured(args.measured)
    bundle = _bundle(args)
    report = size_cfia(bundle, load_plan(plan_path), measured, ratio=args.ratio)
    num = out.num

    out.line("name,kind,w_m,vth_v,ucox_a_per_v2,ro_ohm,i_a_a,i_p_a,method")
    for d in report.designs:
        if d.result is None:
            out.line(f"{d.plan.name},{d.plan.kind.value},failed,,,,,,")
            continue
        r = d.result
        out.line(",".join([d.plan.name, d.plan.kind.value, num(r.w), num(r.vth), num(r.ucox),
                           num(r.ro), num(r.split.i_a), num(r.split.i_p), r.method]))
    out.field("power", report.power, "W")
    out.field("gain_simplified", report.gain_simplified, "V/V")
    if report.gain_full is not None:
        out.field("gain_full", report.gain_full, "V/V")
    for c in report.constraints:
        status = "ok" if c.satisfied else "VIOLATED"
        out.line(f"constraint,{c.name},{num(c.lhs)},{num(c.rhs)},{status}")
    if report.errors is not None:
        e = report.errors
        out.line("quantity,name,expected,actual,error_pct")
        for label, rows in (("v_ds", e.v_ds), ("i_p", e.i_p), ("i_a", e.i_a)):
            for row in rows:
                out.line(f"{label},{row.name},{num(row.expected)},{num(row.actual)},{num(row.error_pct)}")
        for key, c in e.correlations.items():
            out.line(f"correlation,{key},r={num(c.r)},p={num(c.p_two_sided)},"
                     f"ci=({num(c.ci95[0])};{num(c.ci95[1])}),n={c.n}")
    for note in report.notes:
        out.note(f"note: {note}")
    for d in report.failed:
        out.note(f"error: {d.error}")
    return 5 if report.failed else 0


def cmd_characterize(args, out):
    bundle = _bundle(args)
    rows = device.characterize(bundle, args.device, args.w_grid, args.l_grid, args.vgs, args.vds)
    out.stream.write(device.format_characterization(rows))
    return 0


def cmd_stats(args, out):
    if len(args.x) != len(args.y):
        raise UsageError(f"--x has {len(args.x)} values but --y has {len(args.y)}")
    try:
        c = pearson(args.x, args.y)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    n = out.num
    out.line(f"{n(c.r)} {n(c.p_two_sided)} ({n(c.ci95[0])}, {n(c.ci95[1])})")
    return 0


def build_parser():
    p = _Parser(prog="tcmsizer", description=__doc__.splitlines()[0])
    p.add_argument("--bundle", default=None, help=f"coefficient bundle (default {DEFAULT_BUNDLE})")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--precision", type=int, default=6)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fit", help="Gauss-Newton fit of one model family to x,y data")
    f.add_argument("--family", required=True)
    f.add_argument("--data", required=True)
    f.add_argument("--init", required=True, type=_floats)
    f.add_argument("--tol", type=float, default=1e-12)
    f.add_argument("--max-iter", type=int, default=200)
    f.set_defaults(func=cmd_fit)

    e = sub.add_parser("eval", help="evaluate V_th, ucox or r_o")
    e.add_argument("--device", required=True, type=_kind)
    e.add_argument("--quantity", required=True, choices=("vth", "ucox", "ro"))
    e.add_argument("--w", type=_positive)
    e.add_argument("--l", required=True, type=_positive)
    e.set_defaults(func=cmd_eval)

    def bias(sp):
        sp.add_argument("--device", required=True, type=_kind)
        sp.add_argument("--id", required=True, type=_positive)
        sp.add_argument("--vgs", required=True, type=float)
        sp.add_argument("--vds", required=True, type=float)
        sp.add_argument("--l", required=True, type=_positive)

    s = sub.add_parser("size", help="predict W for a DC operating point")
    bias(s)
    s.add_argument("--pin-ucox", type=_positive)
    s.add_argument("--pin-vth", type=float)
    s.add_argument("--pin-ro", type=_positive)
    s.set_defaults(func=cmd_size)

    w = sub.add_parser("sweep", help="linear W sweep of the surrogate drain current")
    bias(w)
    w.add_argument("--w-min", required=True, type=_positive)
    w.add_argument("--w-max", required=True, type=_positive)
    w.add_argument("--steps", type=int, default=1000)
    w.set_defaults(func=cmd_sweep)

    c = sub.add_parser("cfia", help="size the CFIA devices of a design plan")
    c.add_argument("--plan", required=True)
    c.add_argument("--measured")
    c.add_argument("--ratio", type=float, default=10.0)
    c.set_defaults(func=cmd_cfia)

    ch = sub.add_parser("characterize", help="synthetic characterization CSV from the surrogate")
    ch.add_argument("--device", required=True, type=_kind)
    ch.add_argument("--w-grid", required=True, type=_grid)
    ch.add_argument("--l-grid", required=True, type=_grid)
    ch.add_argument("--vgs", type=_positive)
    ch.add_argument("--vds", type=_positive)
    ch.set_defaults(func=cmd_characterize)

    st = sub.add_parser("stats", help="statistics on two series")
    st_sub = st.add_subparsers(dest="stat", required=True, parser_class=_Parser)
    pe = st_sub.add_parser("pearson", help="Pearson r, two-sided p and 95%% CI")
    pe.add_argument("--x", required=True, type=_floats)
    pe.add_argument("--y", required=True, type=_floats)
    pe.set_defaults(func=cmd_stats)
    return p


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 0 or args.precision > 17:
            raise UsageError("--precision must be in [0, 17]")
        return args.func(args, Output(stdout, args.format, args.precision, stderr))
    except SizerError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
