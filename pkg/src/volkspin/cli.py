"""Command-line interface: configuration parsing, scans, result emission.

Subcommands
-----------
area       S_E, sigma_E and unipolarity versus N_c (closed forms + quadrature).
classical  ODE (Larmor / T-BMT) and closed-form spin changes at scan points.
quantum    Full Dirac pipeline: Volkov expansion, propagation, spin reports.
scan       Config-driven sweep combining classical models and spin operators.
verify     Self-verification suite (fast: structural, full: coincidence scans).

Configuration files are TOML with a fixed schema (sections ``pulse``,
``packet``, ``run``, ``scan``, ``output``); unknown keys are hard errors.
Command-line flags override config values.  Output is CSV (fixed, versioned
column order) or JSON mirroring the same columns; every row carries a hash of
the physical configuration, and re-running a config yields byte-identical
files.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .classical import (AnalyticModel, AnalyticSpinInput, SpinModel,
                        analytic_spin_change, delta_pz_estimate,
                        initial_state, integrate_motion, theta0_of_pz)
from .constants import C_AU
from .errors import ConfigError, VolkspinError
from .pipeline import run_quantum
from .pulse import PulseParams, field_area, sigma_E, unipolarity
from .spinops import SpinOperatorKind
from .verify import run_checks
from .volkov import PacketSpec

__all__ = ["ExperimentConfig", "ResultRow", "load_config", "run_scan", "main"]

#: versioned identifier of the output column layout
SCHEMA_VERSION = "volkspin-rows-1"

#: canonical emission order of classical models and spin operators
MODEL_ORDER = ("LARMOR", "TBMT", "ANALYTIC_NR", "ANALYTIC_NR_APPROX",
               "ANALYTIC_REL")
OPERATOR_ORDER = ("PAULI", "FW", "FRENKEL", "PRYCE", "BOOST_REST_FRAME")

#: diagnostics thresholds; any exceedance makes the process exit nonzero
NORM_ERROR_MAX = 1e-6
TAIL_MASS_MAX = 1e-6

_SCAN_VARIABLES = ("N_c", "p_z", "dq", "omega")

#: published config schema: section -> {key: type}
_SCHEMA = {
    "pulse": {"e_star": float, "omega": float, "n_c": float, "l": float,
              "l_tilde": float, "c": float},
    "packet": {"p_x": float, "p_y": float, "p_z": float, "s": int,
               "dq": float},
    "run": {"operators": list, "classical_models": list, "threads": int},
    "scan": {"variable": str, "values": list, "start": float, "stop": float,
             "step": float},
    "output": {"path": str, "format": str},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description (flat; all values in atomic units)."""

    e_star: float = 10.0
    omega: float = 1.0
    n_c: float = 0.5
    l: float = 50.0
    l_tilde: float = 50.0
    c: float = C_AU
    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0
    s: int = +1
    dq: float = 1e-2
    operators: tuple[str, ...] = ("FW",)
    classical_models: tuple[str, ...] = MODEL_ORDER
    scan_variable: str | None = None
    scan_values: tuple[float, ...] = ()
    threads: int = 1
    out_path: str | None = None
    out_format: str = "csv"

    def pulse(self) -> PulseParams:
        return PulseParams(e_star=self.e_star, omega=self.omega,
                           n_c=self.n_c, l=self.l, l_tilde=self.l_tilde,
                           c=self.c)

    def packet(self) -> PacketSpec:
        return PacketSpec(p=np.array([self.p_x, self.p_y, self.p_z]),
                          s=self.s, dq=self.dq)

    def at(self, value: float | None) -> "ExperimentConfig":
        """Config with the scan variable replaced by ``value``."""
        if value is None or self.scan_variable is None:
            return self
        key = {"N_c": "n_c", "p_z": "p_z", "dq": "dq",
               "omega": "omega"}[self.scan_variable]
        return replace(self, **{key: float(value)})

    def config_hash(self) -> str:
        """Hash of the physical parameters (not output plumbing)."""
        physical = {
            "schema": SCHEMA_VERSION,
            "pulse": {"e_star": self.e_star, "omega": self.omega,
                      "n_c": self.n_c, "l": self.l, "l_tilde": self.l_tilde,
                      "c": self.c},
            "packet": {"p_x": self.p_x, "p_y": self.p_y, "p_z": self.p_z,
                       "s": self.s, "dq": self.dq},
            "operators": list(self.operators),
            "classical_models": list(self.classical_models),
            "scan": {"variable": self.scan_variable,
                     "values": list(self.scan_values)},
        }
        blob = json.dumps(physical, sort_keys=True,
                          separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class ResultRow:
    """One scan point: ordered column -> value mapping."""

    columns: tuple[str, ...]
    values: dict = field(default_factory=dict)

    def as_list(self):
        return [self.values[c] for c in self.columns]


# ---------------------------------------------------------------------------
# configuration loading and validation

def _coerce(section: str, key: str, value, expected):
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{section}.{key} must be a number, "
                              f"got {value!r}")
        return float(value)
    if expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{section}.{key} must be an integer, "
                              f"got {value!r}")
        return int(value)
    if expected is str:
        if not isinstance(value, str):
            raise ConfigError(f"{section}.{key} must be a string, "
                              f"got {value!r}")
        return value
    if expected is list:
        if not isinstance(value, list):
            raise ConfigError(f"{section}.{key} must be a list, "
                              f"got {value!r}")
        return list(value)
    raise AssertionError(expected)


def _validate_names(section: str, key: str, names, allowed):
    out = []
    for name in names:
        if not isinstance(name, str) or name not in allowed:
            raise ConfigError(f"{section}.{key}: unknown name {name!r}; "
                              f"allowed: {', '.join(allowed)}")
        out.append(name)
    return tuple(out)


def _canonical_order(names, order):
    """Requested names re-emitted in the canonical column order."""
    return tuple(n for n in order if n in names)


def _scan_values(scan: dict) -> tuple[str, tuple[float, ...]]:
    variable = scan.get("variable")
    if variable is None:
        raise ConfigError("scan.variable is required when [scan] is present")
    if variable not in _SCAN_VARIABLES:
        raise ConfigError(f"scan.variable must be one of "
                          f"{', '.join(_SCAN_VARIABLES)}, got {variable!r}")
    explicit = "values" in scan
    ranged = any(k in scan for k in ("start", "stop", "step"))
    if explicit == ranged:
        raise ConfigError("scan needs either 'values' or "
                          "'start'/'stop'/'step', not both or neither")
    if explicit:
        values = [float(v) for v in scan["values"]]
    else:
        missing = [k for k in ("start", "stop", "step") if k not in scan]
        if missing:
            raise ConfigError(f"scan range is missing {', '.join(missing)}")
        start, stop, step = scan["start"], scan["stop"], scan["step"]
        if step <= 0:
            raise ConfigError("scan.step must be > 0")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [start + k * step for k in range(n)]
    if not values:
        raise ConfigError("scan produced no values")
    if variable in ("dq", "omega"):
        bad = [v for v in values if v <= 0]
        if bad:
            raise ConfigError(f"scan: {variable} values must be > 0, "
                              f"got {bad}")
    return variable, tuple(values)


def _check_scan_ranges(config: ExperimentConfig) -> list[str]:
    """Range validation; N_c outside (0, 2] is allowed with a warning."""
    warnings = []
    var, values = config.scan_variable, config.scan_values
    if var == "N_c":
        bad = [v for v in values if not 0.0 < v <= 2.0]
        if bad:
            warnings.append(f"scan: N_c values outside (0, 2]: {bad}")
    return warnings


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate a TOML config file.  Unknown keys are hard errors."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    return parse_config(raw)


def parse_config(raw: dict) -> ExperimentConfig:
    for section in raw:
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]; allowed: "
                              f"{', '.join(_SCHEMA)}")
        if not isinstance(raw[section], dict):
            raise ConfigError(f"[{section}] must be a table")
        for key in raw[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {section}.{key}; allowed: "
                    f"{', '.join(_SCHEMA[section])}")

    def get(section, key, default):
        if section in raw and key in raw[section]:
            return _coerce(section, key, raw[section][key],
                           _SCHEMA[section][key])
        return default

    kwargs = dict(
        e_star=get("pulse", "e_star", 10.0),
        omega=get("pulse", "omega", 1.0),
        n_c=get("pulse", "n_c", 0.5),
        l=get("pulse", "l", 50.0),
        l_tilde=get("pulse", "l_tilde", 50.0),
        c=get("pulse", "c", C_AU),
        p_x=get("packet", "p_x", 0.0),
        p_y=get("packet", "p_y", 0.0),
        p_z=get("packet", "p_z", 0.0),
        s=get("packet", "s", +1),
        dq=get("packet", "dq", 1e-2),
        threads=get("run", "threads", 1),
    )
    ops = get("run", "operators", None)
    if ops is not None:
        names = _validate_names("run", "operators", ops,
                                [k.value for k in SpinOperatorKind])
        kwargs["operators"] = _canonical_order(names, OPERATOR_ORDER)
    models = get("run", "classical_models", None)
    if models is not None:
        names = _validate_names("run", "classical_models", models,
                                MODEL_ORDER)
        kwargs["classical_models"] = _canonical_order(names, MODEL_ORDER)
    if "scan" in raw:
        variable, values = _scan_values(raw["scan"])
        kwargs["scan_variable"] = variable
        kwargs["scan_values"] = values
    if "output" in raw:
        kwargs["out_path"] = get("output", "path", None)
        fmt = get("output", "format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, "
                              f"got {fmt!r}")
        kwargs["out_format"] = fmt
    try:
        config = ExperimentConfig(**kwargs)
        config.pulse()
        config.packet()
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc
    return config


# ---------------------------------------------------------------------------
# per-point computation

def _columns(config: ExperimentConfig, mode: str) -> tuple[str, ...]:
    cols = ["scan_variable", "scan_value", "e_star", "omega", "n_c", "p_z",
            "dq", "s_e", "sigma_e", "theta0", "delta_pz_pred"]
    if mode == "area":
        cols.append("unipolarity")
    if mode in ("classical", "scan"):
        for model in _canonical_order(config.classical_models, MODEL_ORDER):
            cols += [f"ds_x_{model.lower()}", f"ds_y_{model.lower()}",
                     f"ds_z_{model.lower()}"]
    if mode in ("quantum", "scan"):
        for op in _canonical_order(config.operators, OPERATOR_ORDER):
            cols += [f"ds_x_{op.lower()}", f"ds_y_{op.lower()}",
                     f"ds_z_{op.lower()}"]
        cols += ["helicity", "pz_change", "norm_error", "tail_mass"]
    cols.append("config_hash")
    return tuple(cols)


def _classical_ds(model: str, pulse: PulseParams, p_z: float) -> np.ndarray:
    if model in ("LARMOR", "TBMT"):
        traj = integrate_motion(initial_state(p_z, t=0.0, z=0.0, c=pulse.c),
                                pulse, spin_model=SpinModel[model])
        return traj.s[-1] - traj.s[0]
    analytic = AnalyticModel[model.removeprefix("ANALYTIC_")]
    return analytic_spin_change(AnalyticSpinInput(
        sigma=sigma_E(pulse), theta0=theta0_of_pz(p_z, pulse.c), p_z=p_z,
        model=analytic, c=pulse.c))


def compute_point(config: ExperimentConfig, mode: str,
                  value: float | None) -> ResultRow:
    """Evaluate one scan point; column set is fixed by config + mode."""
    point = config.at(value)
    pulse = point.pulse()
    s_e = field_area(pulse)
    row = {
        "scan_variable": config.scan_variable or "",
        "scan_value": value if value is not None else "",
        "e_star": point.e_star,
        "omega": point.omega,
        "n_c": point.n_c,
        "p_z": point.p_z,
        "dq": point.dq,
        "s_e": s_e,
        "sigma_e": sigma_E(pulse),
        "theta0": theta0_of_pz(point.p_z, pulse.c),
        "delta_pz_pred": delta_pz_estimate(point.p_z, s_e, pulse.c),
        "config_hash": config.config_hash(),
    }
    if mode == "area":
        row["unipolarity"] = unipolarity(pulse)
    if mode in ("classical", "scan"):
        for model in _canonical_order(point.classical_models, MODEL_ORDER):
            ds = _classical_ds(model, pulse, point.p_z)
            row[f"ds_x_{model.lower()}"] = ds[0]
            row[f"ds_y_{model.lower()}"] = ds[1]
            row[f"ds_z_{model.lower()}"] = ds[2]
    if mode in ("quantum", "scan"):
        kinds = [SpinOperatorKind(op)
                 for op in _canonical_order(point.operators, OPERATOR_ORDER)]
        run = run_quantum(point.packet(), pulse, kinds)
        for op in kinds:
            ds = run.reports[op].ds
            row[f"ds_x_{op.value.lower()}"] = ds[0]
            row[f"ds_y_{op.value.lower()}"] = ds[1]
            row[f"ds_z_{op.value.lower()}"] = ds[2]
        report = run.reports[kinds[0]]
        row["helicity"] = report.helicity
        row["pz_change"] = report.pz_mean - point.p_z
        row["norm_error"] = abs(report.norm - 1.0)
        row["tail_mass"] = abs(run.coefficients.norm() - 1.0)
    return ResultRow(columns=_columns(config, mode), values=row)


def _point_worker(args) -> ResultRow:
    config, mode, value = args
    try:
        return compute_point(config, mode, value)
    except VolkspinError as exc:
        label = (f"{config.scan_variable}={value}"
                 if config.scan_variable else "single point")
        raise type(exc)(f"{exc} [at scan point {label}]") from exc


def run_scan(config: ExperimentConfig, mode: str) -> list[ResultRow]:
    """All scan points of the config, assembled in input order."""
    values = list(config.scan_values) if config.scan_variable else [None]
    jobs = [(config, mode, v) for v in values]
    if config.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            return list(pool.map(_point_worker, jobs))
    return [_point_worker(job) for job in jobs]


# ---------------------------------------------------------------------------
# output emission

def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rows[0].columns)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row.as_list()])
    return buf.getvalue()


def rows_to_json(rows: list[ResultRow]) -> str:
    payload = {
        "schema": SCHEMA_VERSION,
        "columns": list(rows[0].columns),
        "rows": [{c: (v if isinstance(v, str) else
                      (int(v) if isinstance(v, (int, np.integer))
                       else float(v)))
                  for c, v in zip(row.columns, row.as_list())}
                 for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _diagnostics_ok(rows: list[ResultRow]) -> bool:
    for row in rows:
        if row.values.get("norm_error", 0.0) > NORM_ERROR_MAX:
            return False
        if row.values.get("tail_mass", 0.0) > TAIL_MASS_MAX:
            return False
    return True


# ---------------------------------------------------------------------------
# argument parsing

def _add_common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", metavar="PATH",
                        help="TOML experiment configuration")
    parser.add_argument("--out", metavar="PATH",
                        help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"),
                        help="output format (default: csv)")
    parser.add_argument("--nc", type=float, help="cycle count N_c")
    parser.add_argument("--pz", type=float,
                        help="initial longitudinal momentum [a.u.]")
    parser.add_argument("--estar", type=float,
                        help="field amplitude E_* [a.u.]")
    parser.add_argument("--omega", type=float,
                        help="carrier frequency [a.u.]")
    parser.add_argument("--dq", type=float,
                        help="packet momentum width [a.u.]")
    parser.add_argument("--operator", metavar="NAME[,NAME...]",
                        help="spin operators (comma separated): "
                             + ", ".join(OPERATOR_ORDER))
    parser.add_argument("--threads", type=int, help="worker pool size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volkspin",
        description="Relativistic electron spin dynamics in finite "
                    "unipolar laser pulses (atomic units).")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("area", "field area, dimensionless area and unipolarity"),
            ("classical", "ODE and closed-form classical spin changes"),
            ("quantum", "full Dirac pipeline with spin operator reports"),
            ("scan", "config-driven sweep (classical + quantum columns)")):
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p)
    v = sub.add_parser("verify", help="self-verification report")
    v.add_argument("level", nargs="?", choices=("fast", "full"),
                   default="fast")
    v.add_argument("--out", metavar="PATH",
                   help="report file (default: stdout)")
    return parser


def _apply_flags(config: ExperimentConfig,
                 args: argparse.Namespace) -> ExperimentConfig:
    updates = {}
    for attr, key in (("nc", "n_c"), ("pz", "p_z"), ("estar", "e_star"),
                      ("omega", "omega"), ("dq", "dq"),
                      ("threads", "threads"), ("out", "out_path"),
                      ("format", "out_format")):
        value = getattr(args, attr, None)
        if value is not None:
            updates[key] = value
    if getattr(args, "operator", None):
        names = _validate_names("run", "operators",
                                args.operator.split(","),
                                [k.value for k in SpinOperatorKind])
        updates["operators"] = _canonical_order(names, OPERATOR_ORDER)
    config = replace(config, **updates)
    try:
        config.pulse()
        config.packet()
        if config.threads < 1:
            raise ValueError("threads must be >= 1")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return config


_AREA_DEFAULT_GRID = tuple(round(0.05 * k, 2) for k in range(1, 41))


def _run_subcommand(mode: str, args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    config = _apply_flags(config, args)
    if (mode == "area" and config.scan_variable is None
            and getattr(args, "nc", None) is None):
        config = replace(config, scan_variable="N_c",
                         scan_values=_AREA_DEFAULT_GRID)
    for warning in _check_scan_ranges(config):
        print(f"warning: {warning}", file=sys.stderr)
    rows = run_scan(config, mode)
    text = (rows_to_csv(rows) if config.out_format == "csv"
            else rows_to_json(rows))
    _emit(text, config.out_path)
    return 0 if _diagnostics_ok(rows) else 1


def _run_verify(args: argparse.Namespace) -> int:
    results = run_checks(args.level)
    report = {
        "level": args.level,
        "passed": all(r.passed for r in results),
        "checks": [r.to_json_dict() for r in results],
    }
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        return _run_subcommand(args.command, args)
    except VolkspinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
