"""Command line front end.

Subcommands wrap the library operations one-to-one and emit deterministic
text: exact scalars render canonically, every float goes through %.12g, and
no randomness exists anywhere, so identical invocations produce byte
identical output regardless of --jobs.

Exit codes: 0 ok, 2 configuration, 3 step cap, 4 failed precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from .iet import IET, Permutation
from .induction import StepCapExceeded, build_tall_stack, induce, verify_stack
from .scalar import Scalar, ScalarParseError, parse_scalar, render_scalar, to_float
from .separation import (
    default_schedule,
    evidence_threshold,
    phi_records,
    psi_records,
    scan_critical,
    schedule_hash,
)
from .weyl import eigenvalue_scan

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


class PreconditionFailed(RuntimeError):
    pass


def _fmt(v: float) -> str:
    return f"{float(v):.12g}"


def load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    data = p.read_bytes()
    if p.suffix == ".json":
        try:
            return json.loads(data)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config: invalid JSON: {e}") from None
    try:
        return tomllib.loads(data.decode())
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config: invalid TOML: {e}") from None


def iet_from_config(cfg: dict) -> IET:
    if "lengths" not in cfg:
        raise ConfigError("config: missing field 'lengths'")
    if "perm" not in cfg:
        raise ConfigError("config: missing field 'perm'")
    try:
        lengths = [parse_scalar(s) for s in cfg["lengths"]]
    except (ScalarParseError, TypeError) as e:
        raise ConfigError(f"config: bad 'lengths': {e}") from None
    try:
        perm = Permutation(cfg["perm"])
    except (ValueError, TypeError) as e:
        raise ConfigError(f"config: bad 'perm': {e}") from None
    try:
        return IET(lengths, perm)
    except ValueError as e:
        raise ConfigError(f"config: {e}") from None


def parse_grid(text: str) -> list[Scalar]:
    """lo:hi:count with rational lo/hi (fractions or decimals), exact spacing."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid: expected lo:hi:count, got {text!r}")
    try:
        lo, hi = Fraction(parts[0]), Fraction(parts[1])
        count = int(parts[2])
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"grid: {e}") from None
    if count < 1:
        raise ConfigError("grid: count must be >= 1")
    if count == 1:
        return [Scalar(lo)]
    step = Fraction(hi - lo, count - 1)
    return [Scalar(lo + k * step) for k in range(count)]


def _scalar_arg(text: str, name: str) -> Scalar:
    try:
        return parse_scalar(text)
    except ScalarParseError as e:
        raise ConfigError(f"{name}: {e}") from None


# -- command bodies (each returns the full output string) ----------------------------


def cmd_eval(f: IET, args) -> str:
    x = _scalar_arg(args.x, "x")
    try:
        y = f.evaluate_inverse(x) if args.inverse else f.evaluate(x)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return render_scalar(y) + "\n"


def cmd_orbit(f: IET, args) -> str:
    x = _scalar_arg(args.x, "x")
    try:
        window = f.orbit_window(x, args.n, symmetric=args.symmetric)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return "".join(f"{k} {render_scalar(p)}\n" for k, p in window.items())


def cmd_induce(f: IET, args) -> str:
    t = _scalar_arg(args.t, "t")
    try:
        ind = induce(f, t, step_cap=args.step_cap)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    rows = [
        {
            "lo": render_scalar(p.interval.lo),
            "hi": render_scalar(p.interval.hi),
            "return_time": p.return_time,
            "translation": render_scalar(p.translation),
        }
        for p in ind.pieces
    ]
    if args.format == "csv":
        lines = [f"# schema_version={SCHEMA_VERSION}", f"# s={ind.s}",
                 "lo,hi,return_time,translation"]
        lines += [f"{r['lo']},{r['hi']},{r['return_time']},{r['translation']}" for r in rows]
        return "\n".join(lines) + "\n"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "t": render_scalar(t),
        "s": ind.s,
        "pieces": rows,
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_psi(f: IET, args) -> str:
    t = _scalar_arg(args.t, "t")
    fn = phi_records if args.phi else psi_records
    try:
        series = fn(f, t, args.N)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    entries = [
        {
            "n": e.n,
            "value": render_scalar(e.value),
            "value_float": _fmt(to_float(e.value)),
            "is_record": e.is_record,
        }
        for e in series.entries
    ]
    if args.format == "csv":
        lines = [f"# schema_version={SCHEMA_VERSION}",
                 f"# t={render_scalar(t)} N={series.horizon} variant={series.variant}"
                 f" schedule_hash={series.schedule_hash}",
                 f"# psi_hat={_fmt(series.psi_hat)} valid={str(series.valid).lower()}"
                 f" threshold_reference={_fmt(evidence_threshold(f))}",
                 "n,value,value_float,is_record"]
        lines += [f"{e['n']},{e['value']},{e['value_float']},{str(e['is_record']).lower()}"
                  for e in entries]
        return "\n".join(lines) + "\n"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "t": render_scalar(t),
        "N": series.horizon,
        "variant": series.variant,
        "schedule_hash": series.schedule_hash,
        "psi_hat": _fmt(series.psi_hat),
        "valid": series.valid,
        "zero_n": series.zero_n,
        "threshold_reference": _fmt(evidence_threshold(f)),
        "entries": entries,
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_scan(f: IET, args) -> str:
    grid = parse_grid(args.grid)
    threshold = args.threshold if args.threshold is not None else evidence_threshold(f)
    try:
        rows = scan_critical(f, grid, args.N, threshold, jobs=args.jobs)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    sched = default_schedule(args.N)
    meta = (f"N={args.N} threshold={_fmt(threshold)} schedule_hash={schedule_hash(sched)}")
    out_rows = [
        {
            "t": render_scalar(r.t),
            "classification": r.classification,
            "psi_hat": _fmt(r.psi_hat),
            "record_count": r.record_count,
            "best_n": "" if r.best_n is None else r.best_n,
            "best_value_exact": "" if r.best_value is None else render_scalar(r.best_value),
            "dprime_depth": "" if r.dprime_k is None else abs(r.dprime_k),
        }
        for r in rows
    ]
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "N": args.N,
            "threshold": _fmt(threshold),
            "schedule_hash": schedule_hash(sched),
            "rows": out_rows,
        }
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"# schema_version={SCHEMA_VERSION}", f"# {meta}",
             "t,classification,psi_hat,record_count,best_n,best_value_exact,dprime_depth"]
    lines += [
        f"{r['t']},{r['classification']},{r['psi_hat']},{r['record_count']},"
        f"{r['best_n']},{r['best_value_exact']},{r['dprime_depth']}"
        for r in out_rows
    ]
    return "\n".join(lines) + "\n"


def cmd_wm(f: IET, args) -> str:
    t = _scalar_arg(args.t, "t")
    x = _scalar_arg(args.x, "x") if args.x else None
    try:
        scan = eigenvalue_scan(f, t, args.grid_size, args.N, x=x,
                               peak_threshold=args.peak_threshold)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if args.format == "csv":
        lines = [f"# schema_version={SCHEMA_VERSION}",
                 f"# t={render_scalar(t)} x={render_scalar(scan.x)} N={scan.N}"
                 f" grid_size={scan.grid_size}",
                 "alpha,V_N,V_2N,persistent"]
        for j in range(scan.grid_size):
            vn, v2n = float(scan.v_n[j]), float(scan.v_2n[j])
            lines.append(f"{_fmt(j / scan.grid_size)},{_fmt(vn)},{_fmt(v2n)},"
                         f"{str(abs(vn - v2n) < 0.05).lower()}")
        return "\n".join(lines) + "\n"
    doc = {
        "schema_version": SCHEMA_VERSION,
        "t": render_scalar(t),
        "x": render_scalar(scan.x),
        "N": scan.N,
        "grid_size": scan.grid_size,
        "peak_threshold": _fmt(scan.peak_threshold),
        "determinism": "seed-free; exact orbit membership",
        "peaks": [
            {
                "alpha": _fmt(p.alpha),
                "V_N": _fmt(p.v_n),
                "V_2N": _fmt(p.v_2n),
                "persistent": p.persistent,
            }
            for p in scan.peaks
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_stack(f: IET, args) -> str:
    collision = f.check_idoc(args.idoc_depth)
    if collision is not None:
        raise PreconditionFailed(
            f"aperiodicity probe failed: f^{collision.m}(d_{collision.i}) = d_{collision.j}"
        )
    stack = build_tall_stack(f, args.N, step_cap=args.step_cap)
    violation = verify_stack(f, stack, require_distinct=True)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "N": args.N,
        "height": stack.height,
        "width": render_scalar(stack.width),
        "measure": render_scalar(stack.measure),
        "distinct": stack.distinct,
        "verify": "ok" if violation is None else f"{violation.which}@{violation.level}",
    }
    if args.format == "csv":
        lines = [f"# schema_version={SCHEMA_VERSION}",
                 f"# height={stack.height} width={meta['width']} measure={meta['measure']}"
                 f" distinct={str(stack.distinct).lower()} verify={meta['verify']}",
                 "i,lo,hi"]
        lines += [f"{i},{render_scalar(y.lo)},{render_scalar(y.hi)}"
                  for i, y in enumerate(stack.levels, start=1)]
        return "\n".join(lines) + "\n"
    lines = [json.dumps(meta)]
    lines += [
        json.dumps({"i": i, "lo": render_scalar(y.lo), "hi": render_scalar(y.hi)})
        for i, y in enumerate(stack.levels, start=1)
    ]
    return "\n".join(lines) + "\n"


def cmd_idoc(f: IET, args) -> str:
    collision = f.check_idoc(args.depth)
    if collision is None:
        doc = {"schema_version": SCHEMA_VERSION, "depth": args.depth, "result": "ok"}
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "depth": args.depth,
            "result": "collision",
            "m": collision.m,
            "i": collision.i,
            "j": collision.j,
        }
    return json.dumps(doc, indent=2) + "\n"


# -- wiring ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iet",
        description="Exact interval-exchange computations: induction, records, stacks, Weyl scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--config", required=True, help="IET config file (TOML or JSON)")
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        p.add_argument("--output", help="write to file instead of stdout")

    p = sub.add_parser("eval", help="evaluate the map at a point")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("orbit", help="print an orbit window")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symmetric", action="store_true")
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("induce", help="first-return map on [0, t)")
    common(p)
    p.add_argument("--t", required=True)
    p.add_argument("--step-cap", type=int, default=10**6, dest="step_cap")
    p.set_defaults(fn=cmd_induce)

    p = sub.add_parser("psi", help="record series of n*rho'_n(t)")
    common(p)
    p.add_argument("--t", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--phi", action="store_true", help="track n*rho_n instead")
    p.set_defaults(fn=cmd_psi)

    p = sub.add_parser("scan", help="classify a grid of t values")
    common(p, fmt_default="csv")
    p.add_argument("--grid", required=True, help="lo:hi:count, rational endpoints")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("wm", help="Weyl eigenfrequency scan for the induced map")
    common(p)
    p.add_argument("--t", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--grid-size", type=int, default=1024, dest="grid_size")
    p.add_argument("--x", default=None)
    p.add_argument("--peak-threshold", type=float, default=0.1, dest="peak_threshold")
    p.add_argument("--jobs", type=int, default=1,
                   help="accepted for interface parity; the grid pass is vectorized")
    p.set_defaults(fn=cmd_wm)

    p = sub.add_parser("stack", help="build a tall distinct stack")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--step-cap", type=int, default=10**6, dest="step_cap")
    p.add_argument("--idoc-depth", type=int, default=10**4, dest="idoc_depth")
    p.set_defaults(fn=cmd_stack)

    p = sub.add_parser("idoc", help="probe the orbits of the breakpoints")
    common(p)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(fn=cmd_idoc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        f = iet_from_config(load_config(args.config))
        out = args.fn(f, args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except StepCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except PreconditionFailed as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
