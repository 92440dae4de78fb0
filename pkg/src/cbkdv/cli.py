"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.
Errors are written to stderr as one JSON object {"error": code, "message": ...}.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .ansatz.newton import multistart
from .ansatz.system import CandidateVector, compare_with_printed_system, extract_system
from .core_model import (
    PhysicalParameters,
    SignTriple,
    TravelingWaveSolution,
    amplitude_balance,
    evaluate,
    relative_ode_residual,
)
from .errors import CbkdvError, NumericalFailure, ValidationError
from .param_analysis import (
    SweepSpec,
    critical_points,
    monotonicity_report,
    sweep,
)
from .wave_dynamics import GridSpec, TimeSpec, simulate

SCHEMA_VERSION = 1
COMMANDS = ("solve", "verify", "simulate", "system", "sweep", "profile")
VERIFY_TOL = 1e-10
DEFAULT_XI = np.linspace(-20.0, 20.0, 201)

PARAM_KEYS = ("alpha", "beta", "mu", "s")
SIGN_KEYS = ("eps1", "eps2", "eps3", "eps")


class UsageError(ValidationError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    params: PhysicalParameters
    signs: SignTriple
    x0: float = 0.0
    grid: dict = field(default_factory=dict)
    time: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "json"
    extra: dict = field(default_factory=dict)


def _fmt(x: float) -> str:
    return f"{x:.17e}"


def _complex(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _pair(text: str, name: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"{name} expects two comma-separated numbers, got {text!r}") from None
    return lo, hi


def _floats(text: str, name: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"{name} expects comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--config", help="JSON file with the same keys as the flags (flags win)")
    g.add_argument("--alpha", type=float, help="quadratic convection coefficient (> 0)")
    g.add_argument("--beta", type=float, help="cubic convection coefficient (< 0)")
    g.add_argument("--mu", type=float, help="viscosity coefficient (>= 0)")
    g.add_argument("--s", type=float, help="dispersion coefficient (> 0)")
    g.add_argument("--eps1", type=int, choices=(-1, 1))
    g.add_argument("--eps2", type=int, choices=(-1, 1))
    g.add_argument("--eps3", type=int, choices=(-1, 1))
    g.add_argument("--eps", type=int, choices=(-1, 1), help="sign of Im(D1)")
    g.add_argument("--x0", type=float, help="phase shift (default 0)")
    o = common.add_argument_group("output")
    o.add_argument("--out", help="output file (default stdout)")
    o.add_argument("--format", choices=("json", "csv"))
    o.add_argument("--stamp", action="store_true", help="add a creation time to JSON metadata")
    n = common.add_argument_group("grid and time")
    n.add_argument("--grid", help="x_left,x_right, written --grid=-60,60 (default)")
    n.add_argument("--dx", type=float, help="grid spacing")
    n.add_argument("--dt", type=float, help="time step (default: stability guard)")
    n.add_argument("--t-end", dest="t_end", type=float, help="final time")

    parser = _Parser(prog="cbkdv", description="Complex traveling waves of the compound Burgers-KdV equation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="closed-form coefficients")
    sub.add_parser("verify", parents=[common], help="ODE residual, algebraic system, amplitude balance")
    sp = sub.add_parser("simulate", parents=[common], help="integrate the PDE from the exact profile")
    sp.add_argument("--record-every", type=int, default=0, help="record every N steps (0: ends only)")
    sp.add_argument("--reverse", action="store_true", help="integrate toward -t_end (well-posed for mu > 0)")
    sp.add_argument("--metrics-out", help="metrics CSV path (csv format)")
    sy = sub.add_parser("system", parents=[common], help="P_0..P_6 and the comparison with the transcribed reference system")
    sy.add_argument("--multistart", type=int, default=0, help="also run N Gauss-Newton starts")
    sy.add_argument("--seed", type=int, default=0)
    sw = sub.add_parser("sweep", parents=[common], help="velocity and partials along one parameter")
    sw.add_argument("--vary", choices=("alpha", "beta", "mu", "s"))
    sw.add_argument("--range", dest="sweep_range", help="lo,hi")
    sw.add_argument("--count", type=int)
    pf = sub.add_parser("profile", parents=[common], help="u(x, t) table for plotting")
    pf.add_argument("--times", help="comma-separated times (default 0,1,2,3,4,5)")
    return parser


def load_config(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object")
    return data


def _block(data: dict, key: str) -> dict:
    block = data.get(key, {})
    if not isinstance(block, dict):
        raise ValidationError(f"config key {key!r} must be an object")
    return block


def _require(block: dict, keys: tuple[str, ...], name: str) -> None:
    missing = [k for k in keys if k not in block]
    if missing:
        flags = ", ".join("--" + k for k in missing)
        raise UsageError(f"missing {name}: {flags} (flag or config)")
    unknown = set(block) - set(keys)
    if unknown:
        raise ValidationError(f"unknown {name} keys: {sorted(unknown)}")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data = load_config(args.config) if args.config else {}
    p = dict(_block(data, "params"))
    for name in PARAM_KEYS:
        if getattr(args, name) is not None:
            p[name] = getattr(args, name)
    signs = {"eps": 1}
    signs.update(_block(data, "signs"))
    for name in SIGN_KEYS:
        if getattr(args, name) is not None:
            signs[name] = getattr(args, name)
    _require(p, PARAM_KEYS, "params")
    _require(signs, SIGN_KEYS, "signs")
    params = PhysicalParameters(**p)
    sign_triple = SignTriple(**signs)

    x0 = args.x0 if args.x0 is not None else data.get("x0", 0.0)
    if not isinstance(x0, (int, float)) or isinstance(x0, bool):
        raise ValidationError("x0 must be a number")
    grid = dict(_block(data, "grid"))
    if args.grid:
        grid["x_left"], grid["x_right"] = _pair(args.grid, "--grid")
    if args.dx is not None:
        grid["dx"] = args.dx
    time = dict(_block(data, "time"))
    if args.t_end is not None:
        time["t_end"] = args.t_end
    if args.dt is not None:
        time["dt"] = args.dt
    sweep_block = dict(_block(data, "sweep"))
    if getattr(args, "vary", None):
        sweep_block["varying"] = args.vary
    if getattr(args, "sweep_range", None):
        sweep_block["range"] = list(_pair(args.sweep_range, "--range"))
    if getattr(args, "count", None) is not None:
        sweep_block["count"] = args.count
    fmt = args.format or data.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ValidationError(f"format must be json or csv, got {fmt!r}")
    out = args.out or data.get("output_path")
    return RunConfig(
        command=args.command,
        params=params,
        signs=sign_triple,
        x0=float(x0),
        grid=grid,
        time=time,
        sweep=sweep_block,
        output_path=out,
        format=fmt,
        extra={"stamp": args.stamp},
    )


def _header(cfg: RunConfig) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "command": cfg.command,
        "params": cfg.params.as_dict(),
        "signs": cfg.signs.as_dict(),
        "x0": cfg.x0,
    }
    if cfg.extra.get("stamp"):
        doc["metadata"] = {"created": datetime.now(timezone.utc).isoformat()}
    return doc


def _grid(cfg: RunConfig, default_dx: float) -> GridSpec:
    g = cfg.grid
    return GridSpec.from_spacing(
        float(g.get("x_left", -60.0)), float(g.get("x_right", 60.0)), float(g.get("dx", default_dx))
    )


def _emit_text(text: str, path: str | None, stdout) -> None:
    if path is None:
        stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit_json(doc: dict, path: str | None, stdout) -> None:
    _emit_text(json.dumps(doc, indent=2) + "\n", path, stdout)


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([cell if isinstance(cell, str) else _fmt(cell) for cell in row])
    return buf.getvalue()


def verification_report(sol: TravelingWaveSolution, xi=DEFAULT_XI) -> dict:
    ode = relative_ode_residual(sol, xi)
    sv = extract_system(CandidateVector.from_coefficients(sol.coeffs), sol.params)
    quotient, balanced = amplitude_balance(sol.coeffs)
    checks = {
        "ode_residual": ode < VERIFY_TOL,
        "system": sv.relative() < VERIFY_TOL,
        "amplitude_balance": balanced and abs(quotient + 1) < 1e-12,
    }
    return {
        "ode_residual": {"max_relative": ode, "xi_range": [float(xi[0]), float(xi[-1])],
                         "points": int(len(xi)), "tol": VERIFY_TOL},
        "system": {"max_relative": sv.relative(), "max_abs": sv.max_abs(), "tol": VERIFY_TOL},
        "amplitude_balance": {"quotient": quotient, "balanced": balanced},
        "checks": checks,
        "passed": all(checks.values()),
    }


def emit_profile(sol: TravelingWaveSolution, grid: GridSpec, times, path: str | None, stdout=None) -> str:
    """CSV t,x,re_u,im_u; t-major, x ascending."""
    x = grid.x
    rows = []
    for t in times:
        u = evaluate(sol, x, t)
        rows.extend((float(t), float(xi), float(ui.real), float(ui.imag)) for xi, ui in zip(x, u))
    text = _csv_text(["t", "x", "re_u", "im_u"], rows)
    _emit_text(text, path, stdout or sys.stdout)
    return text


def _cmd_solve(cfg: RunConfig, args, stdout) -> int:
    sol = TravelingWaveSolution.build(cfg.params, cfg.signs, cfg.x0)
    doc = _header(cfg)
    c = sol.coeffs
    doc["coefficients"] = {
        "kappa": c.kappa, "B0": c.B0, "B1": c.B1, "C1": c.C1, "D1": _complex(c.D1), "v": c.v,
    }
    if cfg.format == "csv":
        rows = [(k, v) for k, v in (("kappa", c.kappa), ("B0", c.B0), ("B1", c.B1), ("C1", c.C1),
                                     ("D1_re", c.D1.real), ("D1_im", c.D1.imag), ("v", c.v))]
        _emit_text(_csv_text(["name", "value"], rows), cfg.output_path, stdout)
    else:
        _emit_json(doc, cfg.output_path, stdout)
    return 0


def _cmd_verify(cfg: RunConfig, args, stdout) -> int:
    sol = TravelingWaveSolution.build(cfg.params, cfg.signs, cfg.x0)
    doc = _header(cfg)
    doc["report"] = verification_report(sol)
    _emit_json(doc, cfg.output_path, stdout)
    return 0 if doc["report"]["passed"] else 2


def _cmd_simulate(cfg: RunConfig, args, stdout) -> int:
    sol = TravelingWaveSolution.build(cfg.params, cfg.signs, cfg.x0)
    grid = _grid(cfg, 0.1)
    tspec = TimeSpec(float(cfg.time.get("t_end", 2.0)), cfg.time.get("dt"))
    run = simulate(sol, grid, tspec, args.record_every, reverse=args.reverse)
    metric_rows = [(m.t, m.l_inf, m.l2) for _, m in run.records]
    if cfg.format == "csv":
        x = grid.x
        rows = []
        for state, _ in run.records:
            exact = evaluate(sol, x, state.t)
            rows.extend(
                (state.t, float(xi), float(u.real), float(u.imag), float(e.real), float(e.imag))
                for xi, u, e in zip(x, state.values, exact)
            )
        _emit_text(
            _csv_text(["t", "x", "re_u", "im_u", "re_u_exact", "im_u_exact"], rows),
            cfg.output_path, stdout,
        )
        metrics_path = args.metrics_out
        if metrics_path is None and cfg.output_path:
            p = Path(cfg.output_path)
            metrics_path = str(p.with_name(p.stem + "_metrics.csv"))
        if metrics_path:
            Path(metrics_path).write_text(_csv_text(["t", "l_inf", "l2"], metric_rows), encoding="utf-8")
    else:
        doc = _header(cfg)
        doc["grid"] = {"x_left": grid.x_left, "x_right": grid.x_right,
                       "num_points": grid.num_points, "dx": grid.dx}
        doc["time"] = {"t_end": tspec.t_end, "dt": run.dt, "steps": run.steps, "reverse": run.reverse}
        doc["metrics"] = [{"t": t, "l_inf": li, "l2": l2} for t, li, l2 in metric_rows]
        _emit_json(doc, cfg.output_path, stdout)
    return 0


def _cmd_system(cfg: RunConfig, args, stdout) -> int:
    sol = TravelingWaveSolution.build(cfg.params, cfg.signs, cfg.x0)
    cand = CandidateVector.from_coefficients(sol.coeffs)
    doc = _header(cfg)
    doc["candidate"] = cand.as_dict()
    doc["system"] = extract_system(cand, cfg.params).as_dict()
    doc["comparison"] = compare_with_printed_system(cand, cfg.params).as_dict()
    if args.multistart:
        report = multistart(cfg.params, cand, n_starts=args.multistart, seed=args.seed)
        summary = report.summary()
        summary["branches_found"] = [list(b) for b in summary["branches_found"]]
        doc["multistart"] = summary
    _emit_json(doc, cfg.output_path, stdout)
    return 0


def _cmd_sweep(cfg: RunConfig, args, stdout) -> int:
    block = cfg.sweep
    if "varying" not in block or "range" not in block:
        raise UsageError("sweep needs --vary and --range (or a 'sweep' config block)")
    lo, hi = block["range"]
    spec = SweepSpec(block["varying"], float(lo), float(hi), int(block.get("count", 50)),
                     cfg.params, cfg.signs.eps3)
    rows = sweep(spec)
    if cfg.format == "csv":
        _emit_text(
            _csv_text(
                ["varying_param", "value", "v", "dv_dalpha", "dv_dmu", "dv_dabsbeta", "dv_ds"],
                [(r.varying_param, r.value, r.v, *r.gradient.as_tuple()) for r in rows],
            ),
            cfg.output_path, stdout,
        )
    else:
        doc = _header(cfg)
        doc["sweep"] = {"varying": spec.varying, "range": [spec.lo, spec.hi], "count": spec.count,
                        "eps3": spec.eps3}
        doc["rows"] = [
            {"value": r.value, "v": r.v, "dv_dalpha": r.gradient.dv_dalpha,
             "dv_dmu": r.gradient.dv_dmu, "dv_dabsbeta": r.gradient.dv_dabsbeta,
             "dv_ds": r.gradient.dv_ds}
            for r in rows
        ]
        doc["critical_points"] = critical_points(cfg.params, cfg.signs.eps3).as_dict()
        doc["monotonicity"] = monotonicity_report(spec).as_dict()
        _emit_json(doc, cfg.output_path, stdout)
    return 0


def _cmd_profile(cfg: RunConfig, args, stdout) -> int:
    sol = TravelingWaveSolution.build(cfg.params, cfg.signs, cfg.x0)
    grid = _grid(cfg, 0.5)
    times = _floats(args.times, "--times") if args.times else [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
    emit_profile(sol, grid, times, cfg.output_path, stdout)
    return 0


HANDLERS = {
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
    "system": _cmd_system,
    "sweep": _cmd_sweep,
    "profile": _cmd_profile,
}


def _report(code: str, message: str, stderr) -> None:
    stderr.write(json.dumps({"error": code, "message": message}) + "\n")


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        return HANDLERS[cfg.command](cfg, args, stdout)
    except ValidationError as exc:
        _report(exc.code, str(exc), stderr)
        return 1
    except NumericalFailure as exc:
        _report(exc.code, str(exc), stderr)
        return 2
    except OSError as exc:
        _report("io", str(exc), stderr)
        return 3
    except CbkdvError as exc:
        _report(exc.code, str(exc), stderr)
        return 1


def main() -> None:
    sys.exit(run())
