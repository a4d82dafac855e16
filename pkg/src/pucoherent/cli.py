"""Command-line harness: moment reports, time evolution, ratio scans, and
the full self-verification batch, with deterministic csv or json output.

Exit codes: 0 success, 1 validation or numerical failure, 2 usage error.
All tables go to stdout with a fixed column order; diagnostics go to
stderr.  Identical invocations produce byte-identical output: there is no
timestamping, no locale dependence, and randomized checks use fixed seeds.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

from . import classical, modes, puo, validation
from .gcs import TruncationError
from .modes import PuoParams
from .puo import PuoStateLabel

REPORT_FIELDS = puo.MomentReport.FIELDS

EVOLVE_FIELDS = (
    "t",
    "mean_z_closed",
    "mean_z_numeric",
    "z_classical",
    "var_z",
    "var_pz",
    "uncertainty_product",
    "constraint_residual",
)

SCAN_FIELDS = ("ratio", "exact_product", "leading_product", "gap")

VALIDATE_FIELDS = (
    "suite",
    "passed",
    "total",
    "worst_check",
    "worst_value",
    "tolerance",
    "status",
)

_DEFAULTS = {
    "big_freq": 2.0,
    "small_freq": 1.0,
    "J": 0.0,
    "j": 0.0,
    "Gamma0": 0.0,
    "gamma0": 0.0,
    "t": 0.0,
    "t0": None,
    "t1": None,
    "dt": None,
    "truncation": "auto",
    "fmt": "csv",
    "precision": 12,
}

# accepted config-file keys -> canonical names
_CONFIG_ALIASES = {
    "Omega": "big_freq",
    "big_freq": "big_freq",
    "omega": "small_freq",
    "small_freq": "small_freq",
    "J": "J",
    "j": "j",
    "Gamma0": "Gamma0",
    "gamma0": "gamma0",
    "t": "t",
    "t0": "t0",
    "t1": "t1",
    "dt": "dt",
    "truncation": "truncation",
    "format": "fmt",
    "precision": "precision",
}


class UsageError(Exception):
    """Bad flags or config; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    params: PuoParams
    label: PuoStateLabel
    t0: float | None
    t1: float | None
    dt: float | None
    truncation: int | None  # None = auto
    fmt: str
    precision: int


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pucoherent",
        allow_abbrev=False,
        description="Coherent-state moment reports and verification for the "
        "fourth-order (two-frequency) oscillator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--Omega", "--big-freq", dest="big_freq", type=float,
                        default=None, help="fast angular frequency (must exceed --omega)")
        sp.add_argument("--omega", "--small-freq", dest="small_freq", type=float,
                        default=None, help="slow angular frequency")
        sp.add_argument("--J", dest="J", type=float, default=None,
                        help="intensity of the fast-mode state")
        sp.add_argument("--j", dest="j", type=float, default=None,
                        help="intensity of the slow (ghost) mode state")
        sp.add_argument("--Gamma0", dest="Gamma0", type=float, default=None,
                        help="initial phase of the fast mode (radians)")
        sp.add_argument("--gamma0", dest="gamma0", type=float, default=None,
                        help="initial phase of the slow mode (radians)")
        sp.add_argument("--truncation", default=None,
                        help="number-basis depth: 'auto' or a positive integer")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default=None, help="output format (default csv)")
        sp.add_argument("--precision", type=int, default=None,
                        help="significant digits in output, 6..17 (default 12)")
        sp.add_argument("--config", default=None,
                        help="json file with defaults; flags override it")

    rep = sub.add_parser("report", help="closed-form vs numeric moment report")
    add_common(rep)
    rep.add_argument("--t", type=float, default=None, help="evaluation time")

    evo = sub.add_parser("evolve", help="time series of moments and trajectory")
    add_common(evo)
    evo.add_argument("--t0", type=float, default=None, help="start time")
    evo.add_argument("--t1", type=float, default=None, help="end time")
    evo.add_argument("--dt", type=float, default=None, help="row spacing")

    scan = sub.add_parser("scan", help="uncertainty product across frequency ratios")
    add_common(scan)
    scan.add_argument("--param", choices=("ratio",), default="ratio")
    scan.add_argument("--from", dest="start", type=float, default=2.0,
                      help="first ratio (> 1)")
    scan.add_argument("--to", dest="stop", type=float, default=100.0,
                      help="last ratio")
    scan.add_argument("--steps", type=int, default=10, help="number of rows (>= 2)")
    scan.add_argument("--spacing", choices=("linear", "log"), default="linear")

    val = sub.add_parser("validate", help="run every invariant suite")
    add_common(val)
    val.add_argument("--grid", choices=("small", "full"), default="full",
                     help="parameter grid size (default full)")
    val.add_argument("--inject-defect", dest="inject_defect",
                     choices=("inverse-misprint",), default=None,
                     help=argparse.SUPPRESS)

    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError(f"config {path} must hold a json object")
    merged = {}
    for key, value in raw.items():
        if key not in _CONFIG_ALIASES:
            raise UsageError(f"unknown config key {key!r}")
        merged[_CONFIG_ALIASES[key]] = value
    return merged


def _merge(args: argparse.Namespace) -> dict:
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
    settings = {}
    for key, default in _DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
        elif key in file_values:
            settings[key] = file_values[key]
        else:
            settings[key] = default
    return settings


def _parse_truncation(value) -> int | None:
    if value == "auto" or value is None:
        return None
    try:
        n_max = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"truncation must be 'auto' or a positive integer, got {value!r}")
    if n_max < 1:
        raise UsageError(f"truncation must be >= 1, got {n_max}")
    return n_max


def _build_config(args: argparse.Namespace) -> RunConfig:
    settings = _merge(args)
    precision = int(settings["precision"])
    if not 6 <= precision <= 17:
        raise UsageError(f"precision must lie in [6, 17], got {precision}")
    fmt = settings["fmt"]
    if fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {fmt!r}")
    try:
        params = PuoParams(
            big_freq=float(settings["big_freq"]),
            small_freq=float(settings["small_freq"]),
        )
        label = PuoStateLabel(
            J=float(settings["J"]),
            Gamma0=float(settings["Gamma0"]),
            j=float(settings["j"]),
            gamma0=float(settings["gamma0"]),
            t=float(settings["t"]),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for key in ("t0", "t1", "dt"):
        if settings[key] is not None and not math.isfinite(float(settings[key])):
            raise UsageError(f"{key} must be finite")
    return RunConfig(
        params=params,
        label=label,
        t0=None if settings["t0"] is None else float(settings["t0"]),
        t1=None if settings["t1"] is None else float(settings["t1"]),
        dt=None if settings["dt"] is None else float(settings["dt"]),
        truncation=_parse_truncation(settings["truncation"]),
        fmt=fmt,
        precision=precision,
    )


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}g}"


def _jnum(value: float, precision: int) -> float:
    # round-trip through the declared precision so json and csv agree
    return float(_fmt(value, precision))


def _emit_rows(fieldnames, rows, fmt: str, precision: int) -> None:
    if fmt == "csv":
        print(",".join(fieldnames))
        for row in rows:
            print(",".join(
                cell if isinstance(cell, str) else _fmt(cell, precision)
                for cell in row
            ))
    else:
        for row in rows:
            obj = {
                name: (cell if isinstance(cell, str) else _jnum(cell, precision))
                for name, cell in zip(fieldnames, row)
            }
            print(json.dumps(obj))


def _cmd_report(cfg: RunConfig) -> int:
    closed = puo.closed_moments(cfg.params, cfg.label)
    numeric = puo.numeric_moments(cfg.params, cfg.label, cfg.truncation)
    closed_row = [getattr(closed, f) for f in REPORT_FIELDS]
    numeric_row = [getattr(numeric, f) for f in REPORT_FIELDS]
    abs_dev = [abs(c - n) for c, n in zip(closed_row, numeric_row)]
    if cfg.fmt == "csv":
        print(",".join(("row",) + REPORT_FIELDS))
        for name, row in (("closed", closed_row), ("numeric", numeric_row),
                          ("deviation", abs_dev)):
            print(",".join([name] + [_fmt(v, cfg.precision) for v in row]))
    else:
        rel_dev = [
            dev / max(abs(c), abs(n), 1e-300)
            for dev, c, n in zip(abs_dev, closed_row, numeric_row)
        ]
        payload = {
            "params": {"Omega": cfg.params.big_freq, "omega": cfg.params.small_freq},
            "label": {
                "J": cfg.label.J, "Gamma0": cfg.label.Gamma0,
                "j": cfg.label.j, "gamma0": cfg.label.gamma0, "t": cfg.label.t,
            },
            "closed": {f: _jnum(v, cfg.precision)
                       for f, v in zip(REPORT_FIELDS, closed_row)},
            "numeric": {f: _jnum(v, cfg.precision)
                        for f, v in zip(REPORT_FIELDS, numeric_row)},
            "deviation_abs": {f: _jnum(v, cfg.precision)
                              for f, v in zip(REPORT_FIELDS, abs_dev)},
            "deviation_rel": {f: _jnum(v, cfg.precision)
                              for f, v in zip(REPORT_FIELDS, rel_dev)},
        }
        print(json.dumps(payload, indent=2))
    return 0


def _cmd_evolve(cfg: RunConfig) -> int:
    if cfg.t0 is None or cfg.t1 is None or cfg.dt is None:
        raise UsageError("evolve needs --t0, --t1 and --dt")
    if cfg.dt <= 0.0:
        raise UsageError(f"dt must be positive, got {cfg.dt}")
    if cfg.t1 <= cfg.t0:
        raise UsageError(f"need t1 > t0, got t0={cfg.t0}, t1={cfg.t1}")
    n_rows = int(math.floor((cfg.t1 - cfg.t0) / cfg.dt + 1e-9)) + 1
    if n_rows < 2:
        raise UsageError("range shorter than one step; shrink --dt or widen t1-t0")

    # integrator substeps keep the trajectory column at ~1e-8 accuracy
    # regardless of how coarse the requested row spacing is
    sub = max(1, math.ceil(cfg.dt * cfg.params.big_freq / 0.02 - 1e-12))
    start_label = replace(cfg.label, t=cfg.t0)
    traj = classical.integrate(
        cfg.params,
        classical.init_from_label(cfg.params, start_label),
        (n_rows - 1) * cfg.dt,
        cfg.dt / sub,
    )
    rows = []
    for k in range(n_rows):
        t = cfg.t0 + k * cfg.dt
        at_t = replace(cfg.label, t=t)
        closed = puo.closed_moments(cfg.params, at_t)
        numeric = puo.numeric_moments(cfg.params, at_t, cfg.truncation)
        rows.append([
            t,
            closed.mean_z,
            numeric.mean_z,
            float(traj.z[k * sub]),
            numeric.var_z,
            numeric.var_pz,
            numeric.uncertainty_product,
            numeric.constraint_residual,
        ])
    _emit_rows(EVOLVE_FIELDS, rows, cfg.fmt, cfg.precision)
    return 0


def _cmd_scan(cfg: RunConfig, start: float, stop: float, steps: int,
              spacing: str) -> int:
    if steps < 2:
        raise UsageError(f"steps must be >= 2, got {steps}")
    if not (start > 1.0 and stop > 1.0):
        raise UsageError(f"ratios must exceed 1, got from={start}, to={stop}")
    if spacing == "log":
        ratios = [
            math.exp(v)
            for v in _linspace(math.log(start), math.log(stop), steps)
        ]
    else:
        ratios = _linspace(start, stop, steps)
    rows = []
    for ratio in ratios:
        asym = puo.asymptotic_product(PuoParams(big_freq=ratio, small_freq=1.0))
        rows.append([ratio, asym.exact, asym.leading, asym.gap])
    _emit_rows(SCAN_FIELDS, rows, cfg.fmt, cfg.precision)
    return 0


def _linspace(start: float, stop: float, steps: int) -> list[float]:
    width = (stop - start) / (steps - 1)
    return [start + k * width for k in range(steps)]


def _cmd_validate(cfg: RunConfig, grid: str, inject_defect: str | None) -> int:
    inverse_fn = None
    if inject_defect == "inverse-misprint":
        inverse_fn = modes.misprinted_inverse_matrix
    results = validation.run_all(grid, inverse_fn)

    suites: dict[str, list[validation.CheckResult]] = {}
    for res in results:
        suites.setdefault(res.suite, []).append(res)

    def ratio(res: validation.CheckResult) -> float:
        if res.tolerance > 0.0:
            return res.worst / res.tolerance
        return 0.0 if res.worst == 0.0 else math.inf

    rows = []
    for suite_name, checks in suites.items():
        n_pass = sum(1 for c in checks if c.passed)
        worst = max(checks, key=ratio)
        rows.append([
            suite_name,
            str(n_pass),
            str(len(checks)),
            worst.name,
            f"{worst.worst:.3e}",
            f"{worst.tolerance:.3e}",
            "pass" if n_pass == len(checks) else "fail",
        ])
    all_passed = all(res.passed for res in results)
    rows.append([
        "overall",
        str(sum(1 for r in results if r.passed)),
        str(len(results)),
        "",
        "",
        "",
        "pass" if all_passed else "fail",
    ])
    _emit_rows(VALIDATE_FIELDS, rows, cfg.fmt, cfg.precision)
    if not all_passed:
        for res in results:
            if not res.passed:
                print(
                    f"failed: {res.suite}.{res.name} worst={res.worst:.3e} "
                    f"tolerance={res.tolerance:.3e}",
                    file=sys.stderr,
                )
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage problems with code 2
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = _build_config(args)
        if args.command == "report":
            return _cmd_report(cfg)
        if args.command == "evolve":
            return _cmd_evolve(cfg)
        if args.command == "scan":
            return _cmd_scan(cfg, args.start, args.stop, args.steps, args.spacing)
        if args.command == "validate":
            return _cmd_validate(cfg, args.grid, args.inject_defect)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())
