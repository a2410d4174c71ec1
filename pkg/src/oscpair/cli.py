"""Command-line front end.

Subcommands map onto the library operations: ``energy`` writes a JSON
report, ``spectrum`` and the two sweep commands write CSV (optionally an
SVG next to it), ``validate-oracle`` cross-checks the continuum
integrals against the discrete-bath sums.

Exit codes: 0 success, 1 configuration error, 2 numerical
non-convergence, 3 oracle mismatch.

All energies in CSV output are reduced (units of hbar * omega01), so a
CGS config and its hand-converted reduced twin produce identical files.
The JSON report carries both the config's native units and the reduced
values.  Every output file is derived from the parsed config plus the
config file's SHA-256, never from wall time, so reruns are
byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import SweepTable, sweep_coupling, sweep_frequency_ratio
from .discrete_bath import (
    build_bath,
    energy_1_discrete,
    energy_2_discrete,
    interaction_discrete,
)
from .energies import energy_report, sample_spectrum
from .model import (
    BathModel,
    BathSpec,
    InvalidConfig,
    OscillatorParams,
    SystemConfig,
    to_reduced,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NONCONVERGED = 2
EXIT_ORACLE = 3

_COMMAND_BLOCKS = ("spectrum", "sweep", "oracle")


class ConfigError(Exception):
    """Raised for any malformed or inconsistent run configuration."""


def _fmt(x) -> str:
    # repr of a Python float is the shortest round-trip form
    return repr(float(x))


def _load_config(path: str) -> tuple[dict, str]:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path}: config is not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return cfg, hashlib.sha256(raw).hexdigest()


def _require(block: dict, key: str, path: str):
    if key not in block:
        raise ConfigError(f"{path}.{key}: missing required field")
    return block[key]


def _number(block: dict, key: str, path: str, *, default=None) -> float:
    if key not in block:
        if default is not None:
            return default
        raise ConfigError(f"{path}.{key}: missing required field")
    val = block[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {val!r}")
    return float(val)


def _integer(block: dict, key: str, path: str) -> int:
    val = _require(block, key, path)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {val!r}")
    return val


def _object(block: dict, key: str, path: str) -> dict:
    val = _require(block, key, path)
    if not isinstance(val, dict):
        raise ConfigError(f"{path}.{key}: expected an object")
    return val


def _parse_oscillator(block: dict, path: str) -> OscillatorParams:
    return OscillatorParams(
        mass=_number(block, "mass", path),
        eigenfrequency=_number(block, "eigenfrequency", path),
        damping=_number(block, "damping", path),
    )


def _parse_bath(block: dict, path: str) -> BathSpec:
    name = _require(block, "model", path)
    try:
        model = BathModel(name)
    except ValueError:
        valid = ", ".join(m.value for m in BathModel)
        raise ConfigError(f"{path}.model: unknown model {name!r} (one of: {valid})")
    sigma = None
    if "gauss_sigma" in block:
        sigma = _number(block, "gauss_sigma", path)
    return BathSpec(
        model=model,
        temperature=_number(block, "temperature", path),
        cutoff=_number(block, "cutoff", path),
        gauss_sigma=sigma,
    )


def _parse_system(cfg: dict) -> SystemConfig:
    units = cfg.get("units", "cgs")
    system = _object(cfg, "system", "$")
    sys_cfg = SystemConfig(
        osc1=_parse_oscillator(_object(system, "oscillator1", "$.system"), "$.system.oscillator1"),
        osc2=_parse_oscillator(_object(system, "oscillator2", "$.system"), "$.system.oscillator2"),
        bath1=_parse_bath(_object(system, "bath1", "$.system"), "$.system.bath1"),
        bath2=_parse_bath(_object(system, "bath2", "$.system"), "$.system.bath2"),
        coupling=_number(system, "coupling", "$.system"),
        units=units,
    )
    try:
        to_reduced(sys_cfg)
    except InvalidConfig as exc:
        lines = "; ".join(exc.report.errors)
        raise ConfigError(f"$.system: {lines}") from exc
    return sys_cfg


def _check_blocks(cfg: dict, needed: str | None) -> None:
    present = [b for b in _COMMAND_BLOCKS if b in cfg]
    if needed is None:
        if present:
            raise ConfigError(
                f"$.{present[0]}: block not allowed for this command"
            )
        return
    if needed not in present:
        raise ConfigError(f"$.{needed}: missing command block")
    extra = [b for b in present if b != needed]
    if extra:
        raise ConfigError(f"$.{extra[0]}: block not allowed for this command")


def _tolerances(cfg: dict, tol_flag: float | None) -> tuple[float | None, float | None]:
    rel = None
    abs_ = None
    if "tolerances" in cfg:
        block = _object(cfg, "tolerances", "$")
        if "rel" in block:
            rel = _number(block, "rel", "$.tolerances")
        if "abs" in block:
            abs_ = _number(block, "abs", "$.tolerances")
    if tol_flag is not None:
        if tol_flag <= 0.0:
            raise ConfigError("--tol must be positive")
        rel = tol_flag
    return rel, abs_


def _out_dir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
    return out


def _write_csv(path: Path, header: list[str], rows: list[list[str]], cfg_hash: str) -> None:
    lines = [",".join(header), f"# config_sha256={cfg_hash}"]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _integral_payload(result, scale: float | None) -> dict:
    reduced = result.value if scale is None else result.value / scale
    return {
        "value": float(result.value),
        "value_reduced": float(reduced),
        "error_estimate": float(result.error_estimate),
        "evaluations": int(result.evaluations),
        "converged": bool(result.converged),
    }


def cmd_energy(args) -> int:
    cfg, cfg_hash = _load_config(args.config)
    _check_blocks(cfg, None)
    sys_cfg = _parse_system(cfg)
    rel, abs_ = _tolerances(cfg, args.tol)
    out = _out_dir(args)

    report = energy_report(sys_cfg, rel_tol=rel, abs_tol=abs_)
    payload = {
        "config_sha256": cfg_hash,
        "units": sys_cfg.units,
        "lambda_ref": float(sys_cfg.lambda_ref),
        "critical_coupling": float(sys_cfg.critical_coupling),
        "unstable": bool(report.unstable),
        "converged": bool(report.converged),
        "normalized_u_int": float(report.normalized_u_int),
        "u1": _integral_payload(report.u1, report.energy_scale),
        "u2": _integral_payload(report.u2, report.energy_scale),
        "u_int": _integral_payload(report.u_int, report.energy_scale),
    }
    _write_json(out / "energy.json", payload)

    print(f"u1    = {report.u1_reduced:.9e}  (reduced)")
    print(f"u2    = {report.u2_reduced:.9e}  (reduced)")
    print(f"u_int = {report.u_int_reduced:.9e}  (reduced)")
    print(f"normalized u_int = {report.normalized_u_int:.6e}")
    print(f"converged = {report.converged}  unstable = {report.unstable}")
    print(f"wrote {out / 'energy.json'}")
    return EXIT_OK if report.converged else EXIT_NONCONVERGED


def cmd_spectrum(args) -> int:
    cfg, cfg_hash = _load_config(args.config)
    _check_blocks(cfg, "spectrum")
    sys_cfg = _parse_system(cfg)
    out = _out_dir(args)

    block = _object(cfg, "spectrum", "$")
    omega_min = _number(block, "omega_min", "$.spectrum")
    omega_max = _number(block, "omega_max", "$.spectrum")
    samples = _integer(block, "samples", "$.spectrum")
    if samples < 1:
        raise ConfigError("$.spectrum.samples: need at least one sample")
    if omega_min <= 0.0:
        raise ConfigError("$.spectrum.omega_min: must be positive")
    if samples > 1 and omega_max <= omega_min:
        raise ConfigError("$.spectrum.omega_max: must exceed omega_min")

    red = to_reduced(sys_cfg).system
    grid = np.linspace(omega_min, omega_max, samples)
    spectrum = sample_spectrum(red, grid)

    rows = [[_fmt(w), _fmt(v)] for w, v in zip(spectrum.frequencies, spectrum.values)]
    csv_path = out / "spectrum.csv"
    _write_csv(csv_path, ["omega_over_omega01", "u_int_spectral_density"], rows, cfg_hash)
    print(f"wrote {csv_path}")

    if args.svg:
        from .plotting import save_spectrum_plot

        svg_path = save_spectrum_plot(spectrum, out / "spectrum.svg")
        print(f"wrote {svg_path}")
    return EXIT_OK


def _sweep_rows(table: SweepTable, axis: np.ndarray) -> list[list[str]]:
    rows = []
    for x, rep in zip(axis, table.reports):
        rows.append(
            [
                _fmt(x),
                _fmt(rep.u1_reduced),
                _fmt(rep.u2_reduced),
                _fmt(rep.u_int_reduced),
                _fmt(rep.normalized_u_int),
                "true" if rep.converged else "false",
                "true" if rep.unstable else "false",
            ]
        )
    return rows


def _run_sweep(args, kind: str) -> int:
    cfg, cfg_hash = _load_config(args.config)
    _check_blocks(cfg, "sweep")
    sys_cfg = _parse_system(cfg)
    rel, abs_ = _tolerances(cfg, args.tol)
    out = _out_dir(args)

    block = _object(cfg, "sweep", "$")
    start = _number(block, "start", "$.sweep")
    stop = _number(block, "stop", "$.sweep")
    count = _integer(block, "count", "$.sweep")
    if count < 1:
        raise ConfigError("$.sweep.count: need at least one point")
    if count > 1 and stop <= start:
        raise ConfigError("$.sweep.stop: must exceed start")
    axis = np.linspace(start, stop, count)

    if kind == "coupling":
        if start < 0.0:
            raise ConfigError("$.sweep.start: coupling must be non-negative")
        table = sweep_coupling(
            sys_cfg, axis * sys_cfg.lambda_ref, rel_tol=rel, abs_tol=abs_
        )
        header = "coupling_over_lambda0"
        csv_path = out / "sweep_coupling.csv"
        svg_path = out / "sweep_coupling.svg"
    else:
        if start <= 0.0:
            raise ConfigError("$.sweep.start: frequency ratio must be positive")
        try:
            table = sweep_frequency_ratio(sys_cfg, axis, rel_tol=rel, abs_tol=abs_)
        except InvalidConfig as exc:
            raise ConfigError(f"$.sweep: {'; '.join(exc.report.errors)}") from exc
        header = "omega02_over_omega01"
        csv_path = out / "sweep_ratio.csv"
        svg_path = out / "sweep_ratio.svg"

    _write_csv(
        csv_path,
        [header, "u1", "u2", "u_int", "normalized_u_int", "converged", "unstable"],
        _sweep_rows(table, axis),
        cfg_hash,
    )
    print(f"wrote {csv_path}")

    if args.svg:
        from .plotting import save_sweep_plot

        save_sweep_plot(table, svg_path)
        print(f"wrote {svg_path}")

    bad = sum(1 for r in table.reports if not r.converged)
    if bad:
        print(f"{bad} of {len(table.reports)} rows did not converge", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_sweep_coupling(args) -> int:
    return _run_sweep(args, "coupling")


def cmd_sweep_ratio(args) -> int:
    return _run_sweep(args, "ratio")


def cmd_validate_oracle(args) -> int:
    cfg, cfg_hash = _load_config(args.config)
    _check_blocks(cfg, "oracle")
    sys_cfg = _parse_system(cfg)
    rel, abs_ = _tolerances(cfg, args.tol)
    out = _out_dir(args)

    block = _object(cfg, "oracle", "$")
    size = _integer(block, "size", "$.oracle")
    if size < 2:
        raise ConfigError("$.oracle.size: need at least two bath modes")
    threshold = _number(block, "threshold", "$.oracle", default=0.005)
    if threshold <= 0.0:
        raise ConfigError("$.oracle.threshold: must be positive")

    report = energy_report(sys_cfg, rel_tol=rel, abs_tol=abs_)
    if not report.converged:
        print("continuum reference did not converge", file=sys.stderr)
        return EXIT_NONCONVERGED

    bath1 = build_bath(sys_cfg.bath1, sys_cfg.osc1, size)
    bath2 = build_bath(sys_cfg.bath2, sys_cfg.osc2, size)
    discrete = {
        "u1": energy_1_discrete(sys_cfg, bath1, bath2),
        "u2": energy_2_discrete(sys_cfg, bath1, bath2),
        "u_int": interaction_discrete(sys_cfg, bath1, bath2),
    }
    continuum = {
        "u1": report.u1.value,
        "u2": report.u2.value,
        "u_int": report.u_int.value,
    }

    payload = {"config_sha256": cfg_hash, "size": size, "threshold": threshold}
    worst = 0.0
    for name in ("u1", "u2", "u_int"):
        c, d = continuum[name], discrete[name]
        if c == 0.0 and d == 0.0:
            dev = 0.0
        elif c == 0.0:
            dev = float("inf")
        else:
            dev = abs(d - c) / abs(c)
        worst = max(worst, dev)
        payload[name] = {
            "continuum": float(c),
            "discrete": float(d),
            "relative_deviation": float(dev),
        }
        print(f"{name:6s} continuum {c:.9e}  discrete {d:.9e}  rel_dev {dev:.3e}")
    ok = worst <= threshold
    payload["pass"] = bool(ok)
    _write_json(out / "oracle.json", payload)
    print(f"worst deviation {worst:.3e} vs threshold {threshold:.3e}: {'ok' if ok else 'MISMATCH'}")
    print(f"wrote {out / 'oracle.json'}")
    return EXIT_OK if ok else EXIT_ORACLE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscpair",
        description="Stationary energies of two coupled damped oscillators "
        "in independent heat baths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "energy": (cmd_energy, "compute the three stationary energies"),
        "spectrum": (cmd_spectrum, "sample the interaction energy density"),
        "sweep-coupling": (cmd_sweep_coupling, "sweep the coupling strength"),
        "sweep-ratio": (cmd_sweep_ratio, "sweep the eigenfrequency ratio"),
        "validate-oracle": (cmd_validate_oracle, "cross-check against discrete-bath sums"),
    }
    for name, (func, help_text) in commands.items():
        cp = sub.add_parser(name, help=help_text)
        cp.add_argument("--config", required=True, help="path to JSON run config")
        cp.add_argument("--out", default=".", help="output directory (default: .)")
        cp.add_argument("--svg", action="store_true", help="also render an SVG plot")
        cp.add_argument(
            "--tol", type=float, default=None, help="relative tolerance override"
        )
        cp.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
