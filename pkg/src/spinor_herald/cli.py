"""Command-line front end: ``spinor-herald <command> [--config run.toml] [--set key=value ...]``.

Every command writes CSV (or JSON) tables into the ``output`` directory.  CSV
files start with ``#`` metadata lines (tool version, schema, command, config
echo) followed by one header row; JSON files hold
``{"meta": {...}, "columns": [...], "rows": [[...], ...]}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .dynamics import RampSpec, evolve_ramp
from .errors import ConfigError, NumericalError
from .herald import (
    coarsen_distribution,
    herald_distribution,
    heralded_state,
    heralded_states,
    bimodality,
    noon_fidelity,
    rotated_number_distribution,
    sample_heralds,
)
from .metrology import DEFAULT_SCAN_GENERATORS, embed, qfi_pure
from .model import ModelParams
from .quasiprob import SphereGrid, husimi
from .spectra import energy_gap, ground_state
from .transform import k_to_gh, rotate_two_mode

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

SCHEMA_VERSION = 1

FIGURES = {
    "1a": ("gap", "energy gap / (N |lambda|) versus q/q_c"),
    "1b": ("husimi", "ground-state quasiprobability on the Bloch sphere (Husimi in place of Wigner)"),
    "1c": ("qfi-scan", "ground-state QFI for S_x, A_y, J_x, J_y versus q/q_c"),
    "2a": ("herald", "probability of each N_h count at q = 0"),
    "2b": ("herald", "rotated P(N_g) for every heralded state"),
    "2c": ("husimi", "Husimi distribution of selected rotated heralded states"),
    "2d": ("herald", "QFI of heralded states with S_x versus N_h"),
    "3a": ("ramp", "fidelity and QFI ratio after the ramp versus tau"),
    "3b": ("ramp", "P(N_h) of the ramped state at tau_herald"),
    "3c": ("ramp", "rotated P(N_g) of heralded ramped states"),
}

# key -> (validator, default); a default of REQUIRED must be supplied
REQUIRED = object()


def _int(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    return int(v)


def _pos_int(v, name):
    v = _int(v, name)
    if v < 1:
        raise ConfigError(f"{name} must be positive")
    return v


def _N(v, name):
    v = _int(v, name)
    if v < 2:
        raise ConfigError(f"{name} must be >= 2")
    return v


def _N_list(v, name):
    vals = v if isinstance(v, list) else [v]
    if not vals:
        raise ConfigError(f"{name} must not be empty")
    return [_N(x, name) for x in vals]


def _float(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name} must be a number, got {v!r}")
    if not np.isfinite(v):
        raise ConfigError(f"{name} must be finite")
    return float(v)


def _pos_float(v, name):
    v = _float(v, name)
    if v <= 0:
        raise ConfigError(f"{name} must be positive")
    return v


def _nonneg_float(v, name):
    v = _float(v, name)
    if v < 0:
        raise ConfigError(f"{name} must be non-negative")
    return v


def _grid(v, name):
    """A list of numbers, or a table {start, stop, num} for an inclusive linspace."""
    if isinstance(v, dict):
        extra = set(v) - {"start", "stop", "num"}
        if extra or len(v) != 3:
            raise ConfigError(f"{name} table needs exactly start, stop, num")
        num = _int(v["num"], f"{name}.num")
        if num < 1:
            raise ConfigError(f"{name} is empty")
        return [float(x) for x in np.linspace(_float(v["start"], name), _float(v["stop"], name), num)]
    if not isinstance(v, list):
        raise ConfigError(f"{name} must be a list or a start/stop/num table")
    if not v:
        raise ConfigError(f"{name} is empty")
    return [_float(x, name) for x in v]


def _pos_grid(v, name):
    vals = _grid(v, name)
    if any(x <= 0 for x in vals):
        raise ConfigError(f"{name} values must be positive")
    return vals


def _str_choice(*choices):
    def check(v, name):
        if v not in choices:
            raise ConfigError(f"{name} must be one of {choices}, got {v!r}")
        return v
    return check


def _generators(v, name):
    from .metrology import GeneratorSpec

    if not isinstance(v, list) or not v:
        raise ConfigError(f"{name} must be a non-empty list")
    for g in v:
        try:
            GeneratorSpec.named(g)
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None
    return [str(g) for g in v]


def _bool(v, name):
    if not isinstance(v, bool):
        raise ConfigError(f"{name} must be true or false")
    return v


def _path(v, name):
    if not isinstance(v, str) or not v:
        raise ConfigError(f"{name} must be a path string")
    return v


def _int_list(v, name):
    vals = v if isinstance(v, list) else [v]
    return [_int(x, name) for x in vals]


COMMON = {
    "output": (_path, "."),
    "format": (_str_choice("csv", "json"), "csv"),
    "workers": (_pos_int, None),
}

SCHEMAS: dict[str, dict[str, tuple[Callable, Any]]] = {
    "gap": {"N": (_N_list, [100, 1000]), "q_grid": (_grid, {"start": -2.0, "stop": 2.0, "num": 81})},
    "qfi-scan": {
        "N": (_N, 100),
        "q_grid": (_grid, {"start": -2.0, "stop": 2.0, "num": 81}),
        "generators": (_generators, list(DEFAULT_SCAN_GENERATORS)),
    },
    "herald": {
        "N": (_N, 500),
        "q_ratio": (_float, 0.0),
        "noise_sigma": (_nonneg_float, 0.0),
        "threshold": (_pos_float, 1e-12),
    },
    "ramp": {
        "N": (_N, 500),
        "tau_grid": (_pos_grid, [0.01, 0.02, 0.04, 0.06, 0.1, 0.2]),
        "tau_herald": (_pos_float, 0.06),
        "q_start_ratio": (_float, 2.0),
        "tol": (_pos_float, 1e-6),
        "threshold": (_pos_float, 1e-12),
    },
    "husimi": {
        "N": (_N, 500),
        "q_ratio": (_float, 0.0),
        "source": (_str_choice("ground", "ramp"), "ground"),
        "tau": (_pos_float, 0.06),
        "N_h": (_int_list, [0, 100, 220]),
        "n_theta": (_pos_int, 91),
        "n_phi": (_pos_int, 180),
        "rotate": (_bool, True),
    },
    "sample": {
        "N": (_N, 500),
        "q_ratio": (_float, 0.0),
        "seed": (_int, 0),
        "count": (_pos_int, 1000),
        "noise_sigma": (_nonneg_float, 0.0),
    },
}


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for one command."""

    command: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    @property
    def workers(self) -> int:
        return self.values.get("workers") or (os.cpu_count() or 1)

    def echo(self) -> dict:
        """Config as written to metadata (only result-affecting keys)."""
        return {k: v for k, v in sorted(self.values.items()) if k not in ("workers", "output")}


def validate_config(command: str, raw: dict) -> RunConfig:
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    schema = {**COMMON, **SCHEMAS[command]}
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {', '.join(unknown)}")
    values = {}
    for key, (check, default) in schema.items():
        if key in raw:
            values[key] = check(raw[key], key)
        elif default is None:
            values[key] = None
        else:
            values[key] = check(default, key)
    if command == "husimi":
        for n in values["N_h"]:
            if not 0 <= n <= values["N"]:
                raise ConfigError(f"N_h={n} outside [0, N]")
    return RunConfig(command, values)


def _parse_set(item: str) -> tuple[str, Any]:
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, text = item.split("=", 1)
    key = key.strip()
    try:
        value = tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        value = text
    return key, value


def load_config(command: str, config_path: str | None, overrides: Sequence[str]) -> RunConfig:
    raw: dict = {}
    if config_path:
        try:
            with open(config_path, "rb") as fh:
                raw = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {config_path}: {exc}") from None
        if command in raw and isinstance(raw[command], dict):
            section = raw.pop(command)
            raw = {k: v for k, v in raw.items() if not isinstance(v, dict) or k in ("q_grid", "tau_grid")}
            raw.update(section)
    for item in overrides:
        k, v = _parse_set(item)
        raw[k] = v
    return validate_config(command, raw)


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def write_table(path: Path, fmt: str, meta: dict, columns: list[str], rows: list[list]) -> Path:
    path = path.with_suffix("." + fmt)
    full_meta = {"tool": "spinor-herald", "version": __version__, "schema": SCHEMA_VERSION, **meta}
    if fmt == "csv":
        lines = [f"# {k}: {json.dumps(v, sort_keys=True)}" for k, v in full_meta.items()]
        lines.append(",".join(columns))
        lines.extend(",".join(_fmt(x) for x in row) for row in rows)
        path.write_text("\n".join(lines) + "\n")
    else:
        doc = {"meta": full_meta, "columns": columns, "rows": [[_jsonable(x) for x in r] for r in rows]}
        path.write_text(json.dumps(doc, sort_keys=False, indent=1) + "\n")
    return path


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _pmap(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- commands


def _gap_point(args):
    N, q = args
    return energy_gap(ModelParams(N, q)) / N


def cmd_gap(cfg: RunConfig, outdir: Path) -> list[Path]:
    rows = []
    for N in cfg["N"]:
        _progress(f"gap: N={N}, {len(cfg['q_grid'])} points")
        gaps = _pmap(_gap_point, [(N, q) for q in cfg["q_grid"]], cfg.workers)
        rows.extend([N, q, g] for q, g in zip(cfg["q_grid"], gaps))
    meta = {"command": "gap", "config": cfg.echo(), "figure": "1a"}
    return [write_table(outdir / "gap", cfg["format"], meta, ["N", "q_over_qc", "gap_over_Nlambda"], rows)]


def _qfi_point(args):
    N, q, gens = args
    full = embed(ground_state(ModelParams(N, q)))
    return [qfi_pure(full, g) for g in gens]


def cmd_qfi_scan(cfg: RunConfig, outdir: Path) -> list[Path]:
    N, gens = cfg["N"], cfg["generators"]
    _progress(f"qfi-scan: N={N}, {len(cfg['q_grid'])} points")
    vals = _pmap(_qfi_point, [(N, q, gens) for q in cfg["q_grid"]], cfg.workers)
    rows = [[q, g, v, v / N] for q, vs in zip(cfg["q_grid"], vals) for g, v in zip(gens, vs)]
    meta = {"command": "qfi-scan", "config": cfg.echo(), "figure": "1c"}
    return [write_table(outdir / "qfi_scan", cfg["format"], meta, ["q_over_qc", "generator", "qfi", "qfi_over_N"], rows)]


def _herald_tables(gh, threshold, noise_sigma=0.0):
    dist = herald_distribution(gh)
    cum = np.cumsum(dist.probs)
    prob_cols = ["N_h", "probability", "cumulative"]
    noisy = coarsen_distribution(dist, noise_sigma).probs if noise_sigma > 0 else None
    if noisy is not None:
        prob_cols.append("probability_noisy")
    prob_rows = []
    for n in range(gh.N + 1):
        row = [n, dist.probs[n], cum[n]]
        if noisy is not None:
            row.append(noisy[n])
        prob_rows.append(row)
    rot_rows, state_rows = [], []
    for h in heralded_states(gh, threshold):
        p = rotated_number_distribution(h)
        rot_rows.extend([h.N_h, ng, p[ng]] for ng in range(h.M + 1))
        qfi = qfi_pure(embed(h), "S_x")
        state_rows.append([h.N_h, h.probability, qfi, qfi / h.M**2 if h.M else 0.0,
                           noon_fidelity(h).fidelity, bimodality(p)])
    summary = [
        ["cutoff_N_h", gh.N // 2],
        ["cumulative_mss_probability", dist.cumulative(gh.N // 2)],
        ["argmax_N_h", int(np.argmax(dist.probs))],
    ]
    return (
        (prob_cols, prob_rows),
        (["N_h", "N_g", "probability"], rot_rows),
        (["N_h", "probability", "qfi_Sx", "qfi_over_M2", "noon_fidelity", "bimodality"], state_rows),
        (["quantity", "value"], summary),
    )


def cmd_herald(cfg: RunConfig, outdir: Path) -> list[Path]:
    N = cfg["N"]
    _progress(f"herald: N={N}, q/q_c={cfg['q_ratio']}")
    gh = k_to_gh(ground_state(ModelParams(N, cfg["q_ratio"])))
    tables = _herald_tables(gh, cfg["threshold"], cfg["noise_sigma"])
    meta = {"command": "herald", "config": cfg.echo()}
    names = [("herald_probs", "2a"), ("herald_rotated", "2b"), ("herald_states", "2d"), ("herald_summary", "2a")]
    return [
        write_table(outdir / name, cfg["format"], {**meta, "figure": fig}, cols, rows)
        for (name, fig), (cols, rows) in zip(names, tables)
    ]


def _ramp_point(args):
    N, tau, q0, tol = args
    r = evolve_ramp(RampSpec(N, tau, q_start_ratio=q0, tol=tol))
    return r.fidelity, r.qfi_ratio, r.steps, r.norm_drift


def cmd_ramp(cfg: RunConfig, outdir: Path) -> list[Path]:
    N, q0, tol = cfg["N"], cfg["q_start_ratio"], cfg["tol"]
    if q0 <= 0:
        raise ConfigError("q_start_ratio must be positive (the ramp ends at q = 0)")
    _progress(f"ramp: N={N}, {len(cfg['tau_grid'])} ramp times")
    res = _pmap(_ramp_point, [(N, t, q0, tol) for t in cfg["tau_grid"]], cfg.workers)
    inv_gap = 1.0 / energy_gap(ModelParams(N, 1.0))
    scan_rows = [[t, f, qr, s, d, inv_gap] for t, (f, qr, s, d) in zip(cfg["tau_grid"], res)]
    meta = {"command": "ramp", "config": cfg.echo()}
    paths = [write_table(outdir / "ramp_scan", cfg["format"], {**meta, "figure": "3a"},
                         ["tau", "fidelity", "qfi_ratio", "steps", "norm_drift", "inverse_critical_gap"], scan_rows)]
    _progress(f"ramp: heralding at tau={cfg['tau_herald']}")
    ramped = evolve_ramp(RampSpec(N, cfg["tau_herald"], q_start_ratio=q0, tol=tol))
    probs, rotated, states, summary = _herald_tables(k_to_gh(ramped.state), cfg["threshold"])
    summary = (summary[0], summary[1] + [["fidelity", ramped.fidelity], ["qfi_ratio", ramped.qfi_ratio]])
    for name, fig, (cols, rows) in (("ramp_herald_probs", "3b", probs), ("ramp_herald_rotated", "3c", rotated),
                                    ("ramp_herald_states", "3c", states), ("ramp_herald_summary", "3b", summary)):
        paths.append(write_table(outdir / name, cfg["format"], {**meta, "figure": fig}, cols, rows))
    return paths


def cmd_husimi(cfg: RunConfig, outdir: Path) -> list[Path]:
    N = cfg["N"]
    if cfg["source"] == "ground":
        state = ground_state(ModelParams(N, cfg["q_ratio"]))
    else:
        state = evolve_ramp(RampSpec(N, cfg["tau"])).state
    gh = k_to_gh(state)
    grid = SphereGrid.uniform(cfg["n_theta"], cfg["n_phi"])
    rows = []
    for n_h in cfg["N_h"]:
        _progress(f"husimi: N_h={n_h}")
        h = heralded_state(gh, n_h)
        amps = h.spin_amplitudes
        if cfg["rotate"]:
            amps = rotate_two_mode(amps, "y", np.pi / 2)
        Q = husimi(amps, grid)
        for a, th in enumerate(grid.theta):
            for b, ph in enumerate(grid.phi):
                rows.append([n_h, th, ph, Q[a, b]])
    meta = {"command": "husimi", "config": cfg.echo(), "figure": "2c"}
    return [write_table(outdir / "husimi", cfg["format"], meta, ["N_h", "theta", "phi", "Q"], rows)]


def cmd_sample(cfg: RunConfig, outdir: Path) -> list[Path]:
    gh = k_to_gh(ground_state(ModelParams(cfg["N"], cfg["q_ratio"])))
    dist = herald_distribution(gh)
    if cfg["noise_sigma"] > 0:
        dist = coarsen_distribution(dist, cfg["noise_sigma"])
    draws = sample_heralds(dist, cfg["seed"], cfg["count"])
    meta = {"command": "sample", "config": cfg.echo(), "generator": "numpy PCG64, inverse CDF"}
    return [write_table(outdir / "sample", cfg["format"], meta, ["draw", "N_h"], [[i, int(n)] for i, n in enumerate(draws)])]


COMMANDS = {
    "gap": cmd_gap,
    "qfi-scan": cmd_qfi_scan,
    "herald": cmd_herald,
    "ramp": cmd_ramp,
    "husimi": cmd_husimi,
    "sample": cmd_sample,
}


def run(cfg: RunConfig) -> list[Path]:
    outdir = Path(cfg["output"])
    outdir.mkdir(parents=True, exist_ok=True)
    return COMMANDS[cfg.command](cfg, outdir)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinor-herald", description=__doc__.splitlines()[0])
    p.add_argument("--list-figures", action="store_true", help="print the figure -> command mapping")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", nargs="?", choices=sorted(COMMANDS))
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key (value parsed as TOML)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.list_figures:
        for fig, (cmd, what) in FIGURES.items():
            print(f"Fig. {fig}\t{cmd}\t{what}")
        return 0
    if not args.command:
        print("spinor-herald: a command is required (or --list-figures)", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args.command, args.config, args.overrides)
        for path in run(cfg):
            print(path)
    except ConfigError as exc:
        print(f"spinor-herald: config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"spinor-herald: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
