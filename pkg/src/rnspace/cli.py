"""``rnspace`` command line: table | simulate | num | hubble."""

from __future__ import annotations

import argparse
import contextlib
import sys
from fractions import Fraction

import numpy as np

from rnspace import hubble, inflation
from rnspace.numbers import Rounding, StringNumber, add, mul, parse, predecessor, round_to, successor
from rnspace.space import SpacePoint

SIMULATION_CAP = 10**8


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _open_output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as f:
            yield f


def _config_kwargs(args) -> dict:
    kwargs = {"beta": args.beta, "c": args.c}
    if args.d is not None:
        kwargs["d"] = args.d
    if args.log2_ratio is not None:
        kwargs["log2_ratio"] = args.log2_ratio
    return kwargs


def _row(text: str) -> tuple[int, int]:
    try:
        e0, n0 = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected E0,N0, got {text!r}") from None
    return e0, n0


def cmd_table(args) -> int:
    rows = list(inflation.WORKED_ROWS) if args.worked else []
    rows += args.row or []
    if (args.e0 is None) != (args.n0 is None):
        raise UsageError("--e0 and --n0 go together")
    if args.e0 is not None:
        rows.append((args.e0, args.n0))
    reports = inflation.generate_table(rows, **_config_kwargs(args))
    with _open_output(args.output) as out:
        if args.format == "text":
            out.write(inflation.table_text(reports))
        else:
            inflation.write_table_csv(reports, out)
    return 0


def cmd_simulate(args) -> int:
    cfg = inflation.InflationConfig(args.e0, args.n0, **_config_kwargs(args))
    L = inflation.cycle_length(args.n0)
    if args.cycles is not None:
        if args.cycles < 1:
            raise UsageError("--cycles must be >= 1")
        steps = args.cycles * L
    else:
        steps = args.steps
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    if args.r < 1:
        raise UsageError("--r must be a nonzero mantissa; the origin does not move")
    p2 = SpacePoint(StringNumber(args.n0, 1, args.r, args.e))
    p1 = SpacePoint.origin(args.n0) if args.r1 is None else SpacePoint(StringNumber(args.n0, 1, args.r1, args.e1))
    moves = steps * (1 if p1.is_origin() else 2)
    if moves > SIMULATION_CAP and not args.force:
        raise UsageError(f"{moves} successor applications exceed the cap {SIMULATION_CAP}; use --force")

    records = inflation.iterate_trace(p2, p1, steps, cfg)
    if args.cycles is None:
        with _open_output(args.output) as out:
            _write_trace(records, out, args.format)
        return 0

    trace = inflation.ExpansionTrace(cfg.n0, cfg.beta, cfg.d, list(records))
    with _open_output(args.output) as out:
        _write_trace(trace.records, out, args.format)
    means = [inflation.averaged_velocity(trace, m) for m in range(args.cycles)]
    for m, v in enumerate(means):
        print(f"cycle {m}: <V> = {v!r} cm/s", file=sys.stderr)
    for m in range(1, len(means)):
        print(f"ratio <V>({m})/<V>({m - 1}) = {means[m] / means[m - 1]:g}", file=sys.stderr)
    return 0


def _write_trace(records, out, fmt):
    if fmt == "csv":
        inflation.write_trace_csv(records, out)
        return
    out.write("j  D  a  A  V_cm_s\n")
    for r in records:
        a = "-" if r.a is None else str(r.a)
        A = "-" if r.A is None else str(r.A)
        V = "-" if r.V is None else f"{r.V:.6g}"
        out.write(f"{r.j}  {r.D}  {a}  {A}  {V}\n")


def cmd_num(args) -> int:
    rounding = Rounding(args.rounding)
    if args.op == "round":
        if args.n is None or len(args.operands) != 1:
            raise UsageError("round takes one rational operand and --n")
        try:
            q = Fraction(args.operands[0])
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"not a rational number: {args.operands[0]!r}") from None
        result = round_to(q, args.n, rounding)
        print(result)
        return 0
    arity = 2 if args.op in ("add", "sub", "mul") else 1
    if len(args.operands) != arity:
        raise UsageError(f"{args.op} takes {arity} operand(s)")
    xs = [parse(t, args.n) for t in args.operands]
    if args.op == "add":
        result = add(xs[0], xs[1], rounding)
    elif args.op == "sub":
        result = add(xs[0], -xs[1], rounding)
    elif args.op == "mul":
        result = mul(xs[0], xs[1], rounding)
    elif args.op == "succ":
        result = successor(xs[0])
    elif args.op == "pred":
        result = predecessor(xs[0])
    else:
        print(xs[0].value)
        return 0
    print(result)
    return 0


def _hubble_model(args) -> hubble.HubbleModel:
    if args.epsilon is not None and args.gamma_period_myr is not None:
        return hubble.HubbleModel(1.0 / (args.gamma_period_myr * 1e6), args.epsilon)
    if args.epsilon is not None:
        if args.epsilon == 0:
            return hubble.HubbleModel(1.0 / 30e6, 0.0)
        return hubble.HubbleModel.from_hubble(args.H, epsilon=args.epsilon)
    return hubble.HubbleModel.from_hubble(args.H, period_myr=args.gamma_period_myr or 30.0)


def _synthetic_kwargs(args) -> dict:
    return {"count": args.count, "d_max": args.d_max, "scatter": args.scatter, "seed": args.seed}


def cmd_hubble(args) -> int:
    if args.input is None and not args.synthetic:
        raise UsageError("give --input PATH or --synthetic")
    model = _hubble_model(args)
    samples = None
    if args.input is not None:
        with open(args.input, newline="") as f:
            samples = hubble.read_samples_csv(f)
    if samples is None:
        samples = hubble.synthetic_samples(model, noise_h=args.H, **_synthetic_kwargs(args))
    report = hubble.step_observability(samples, model)
    fields = report.as_dict()
    fields["gamma_per_year"] = model.gamma
    fields["epsilon"] = model.epsilon
    fields["gamma_epsilon_per_year"] = hubble.hubble_constant(model)

    if args.scan_epsilon:
        grid = np.geomspace(args.scan_min, args.scan_max, args.scan_points)
        if args.input is not None:
            scan = hubble.scan_epsilon(grid, args.H, samples=samples)
        else:
            scan = hubble.scan_epsilon(grid, args.H, **_synthetic_kwargs(args))
        limit = scan.epsilon_upper_limit
        fields["scan_epsilon_boundary"] = limit
        fields["scan_period_myr"] = None if limit is None else limit / hubble.hubble_per_year(args.H) / 1e6

    with _open_output(args.output) as out:
        if args.format == "csv":
            out.write(",".join(fields) + "\n")
            out.write(",".join(_fmt(v) for v in fields.values()) + "\n")
        else:
            width = max(map(len, fields))
            for key, value in fields.items():
                out.write(f"{key.ljust(width)}  {_fmt(value)}\n")
    return 0


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _add_config_flags(p):
    p.add_argument("--beta", type=float, default=inflation.DEFAULT_BETA, help="iterations per second")
    p.add_argument("--d", type=float, default=None, help="unit distance in cm")
    p.add_argument("--log2-ratio", type=float, default=None, help="log2(c / (beta d)); default 20")
    p.add_argument("--c", type=float, default=inflation.C_CM_S, help="speed of light, cm/s")


def _add_output_flags(p, default_format="csv"):
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "text"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rnspace", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="inflation parameters for (e0, n0) rows")
    p.add_argument("--worked", "--paper", dest="worked", action="store_true", help="the eleven worked rows")
    p.add_argument("--row", type=_row, action="append", metavar="E0,N0")
    p.add_argument("--e0", type=int)
    p.add_argument("--n0", type=int)
    _add_config_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("simulate", help="iterate F_< and write the expansion trace")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--r", type=int, default=1, help="mantissa of the moving point's radius")
    p.add_argument("--e", type=int, default=0, help="scale factor of that radius")
    p.add_argument("--r1", type=int, default=None, help="mantissa of the second point (default origin)")
    p.add_argument("--e1", type=int, default=0)
    p.add_argument("--e0", type=int, default=0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--steps", type=int, default=None)
    group.add_argument("--cycles", type=int, default=None)
    p.add_argument("--force", action="store_true", help=f"allow more than {SIMULATION_CAP} steps")
    _add_config_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("num", help="R_n arithmetic on '[-]bb.bbx2^E' numbers")
    p.add_argument("op", choices=("add", "sub", "mul", "succ", "pred", "value", "round"))
    p.add_argument("operands", nargs="+")
    p.add_argument("--n", type=int, default=None, help="expected precision")
    p.add_argument("--rounding", choices=[r.value for r in Rounding], default=Rounding.TOWARD_ZERO.value)
    p.set_defaults(func=cmd_num)

    p = sub.add_parser("hubble", help="step-function redshift against velocity-distance data")
    p.add_argument("--input", default=None, help="CSV with distance_mpc,velocity_km_s,sigma_km_s")
    p.add_argument("--synthetic", action="store_true", help="use the seeded synthetic dataset")
    p.add_argument("--H", type=float, default=hubble.REFERENCE_H0, help="km/s/Mpc")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--gamma-period-myr", type=float, default=None, help="Myr per unit increase of n")
    p.add_argument("--scan-epsilon", action="store_true")
    p.add_argument("--scan-min", type=float, default=1e-4)
    p.add_argument("--scan-max", type=float, default=1e-1)
    p.add_argument("--scan-points", type=int, default=121)
    p.add_argument("--seed", type=int, default=hubble.DEFAULT_SEED)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--d-max", type=float, default=100.0)
    p.add_argument("--scatter", type=float, default=hubble.DEFAULT_SCATTER)
    _add_output_flags(p, default_format="text")
    p.set_defaults(func=cmd_hubble)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and args.steps is None and args.cycles is None:
        args.steps = inflation.cycle_length(args.n0)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"rnspace {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"rnspace {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
