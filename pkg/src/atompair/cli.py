"""Command-line front end.

Subcommands: ``coeffs``, ``evolve``, ``sweep``, ``region``; each takes
``--config <path>`` or ``--preset <name>``, plus ``--out <dir>`` and
``--threads <n>``. Output tables are UTF-8 CSV with LF line endings, a
fixed column order and 17 significant digits; every table comes with a
JSON metadata sidecar carrying the resolved parameters, package version
and a sha256 checksum. Reruns of the same config are byte-identical for
any thread count.

Exit codes: 0 success, 2 configuration/validation error, 3 computation
error, 4 I/O error.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .coefficients import BathKind, SystemParams, assemble
from .config import COMMANDS, RunConfig, load_config, load_preset, preset_names
from .errors import AtompairError, ConfigError
from .sweeps import (LABEL_NAMES, run_curve, run_events, run_max_concurrence,
                     run_region_map)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_IO = 4

_MODE_SUFFIX = {BathKind.ACCELERATED_VACUUM: "accelerated",
                BathKind.THERMAL_AT_UNRUH: "thermal"}
_POP_NAMES = ("pGG", "pAA", "pSS", "pEE")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_text(path: Path, text: str) -> str:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError:
        raise
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _write_meta(path: Path, payload: dict):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write_text(path, text)


def _meta(config: RunConfig, command: str, panel: str, files: dict,
          columns=None, extra=None) -> dict:
    payload = {
        "name": config.name,
        "command": command,
        "panel": panel,
        "version": __version__,
        "parameters": config.raw,
        "files": files,
    }
    if columns is not None:
        payload["columns"] = list(columns)
    if extra:
        payload.update(extra)
    return payload


def _csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def read_table(path):
    """Reparse an emitted CSV into (columns, list of row-lists of strings)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.rstrip("\n").split("\n")
    columns = lines[0].split(",")
    return columns, [line.split(",") for line in lines[1:]]


def _events_payload(spec, result):
    cells = []
    for ci, cell in enumerate(result.cells):
        modes = {}
        for mi, mode in enumerate(result.modes):
            ev = result.events(ci, mi)
            modes[_MODE_SUFFIX[mode]] = {
                "death_time": ev.death_time,
                "birth_time": ev.birth_time,
                "revival": ev.revival,
                "enhancement": ev.enhancement,
                "max_concurrence": ev.max_concurrence,
                "max_time": ev.max_time,
                "revival_amplitude": ev.revival_amplitude,
            }
        cells.append({"cell": {k: float(v) for k, v in cell.items()},
                      "modes": modes})
    return {"panel": spec.label, "cells": cells}


# ---------------------------------------------------------------------------
# subcommands

def cmd_coeffs(config: RunConfig, out_dir, threads):
    config.check_command("coeffs")
    a_values = config.axis_values("a_over_omega")
    L_values = config.axis_values("omega_L")
    columns = ["polarization", "a_over_omega", "omega_L", "bath", "atom_order",
               "A1", "B1", "A2", "B2"]
    rows = []
    pretty = []
    for d1, d2, pol_label in config.polarizations:
        for a in a_values:
            for L in L_values:
                for bath in config.bath_modes:
                    params = SystemParams(
                        a_over_omega=float(a), omega_L=float(L),
                        dipole1=d1, dipole2=d2, bath=bath,
                        gamma0_over_omega=config.gamma0_over_omega)
                    for order in (12, 21):
                        cs = assemble(params, order)
                        rows.append([pol_label, _fmt(a), _fmt(L), bath.value,
                                     str(order), _fmt(cs.A1), _fmt(cs.B1),
                                     _fmt(cs.A2), _fmt(cs.B2)])
                        pretty.append([pol_label, f"{a:g}", f"{L:g}", bath.value,
                                       str(order), f"{cs.A1:.8f}", f"{cs.B1:.8f}",
                                       f"{cs.A2:.8f}", f"{cs.B2:.8f}"])
    widths = [max(len(columns[k]), max(len(r[k]) for r in pretty))
              for k in range(len(columns))]
    print("  ".join(c.rjust(widths[k]) for k, c in enumerate(columns)))
    for row in pretty:
        print("  ".join(v.rjust(widths[k]) for k, v in enumerate(row)))
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{config.name}_coeffs.csv"
        digest = _write_text(csv_path, _csv(columns, rows))
        _write_meta(out_dir / f"{config.name}_coeffs.meta.json",
                    _meta(config, "coeffs", "", {csv_path.name: digest}, columns))
    return EXIT_OK


def _cell_columns(spec):
    return [name for name, _ in spec.cell_axes()]


def cmd_evolve(config: RunConfig, out_dir, threads):
    config.check_command("evolve")
    out_dir.mkdir(parents=True, exist_ok=True)
    for panel, spec in config.sweep_specs("evolve"):
        curve = run_curve(spec, threads=threads)
        cell_cols = _cell_columns(spec)
        columns = list(cell_cols) + ["tau"]
        for mode in curve.modes:
            columns.append(f"C_{_MODE_SUFFIX[mode]}")
        for mode in curve.modes:
            for pop in _POP_NAMES:
                columns.append(f"{pop}_{_MODE_SUFFIX[mode]}")
        rows = []
        for ci, cell in enumerate(curve.cells):
            head = [_fmt(cell[name]) for name in cell_cols]
            for kt, tau in enumerate(curve.times):
                row = head + [_fmt(tau)]
                for mi in range(len(curve.modes)):
                    row.append(_fmt(curve.concurrence[ci, mi, kt]))
                for mi in range(len(curve.modes)):
                    row.extend(_fmt(curve.populations[ci, mi, kt, m]) for m in range(4))
                rows.append(row)
        files = {}
        csv_path = out_dir / f"{config.name}_{panel}.csv"
        files[csv_path.name] = _write_text(csv_path, _csv(columns, rows))
        if "events" in spec.outputs:
            events = run_events(spec, threads=threads)
            ev_path = out_dir / f"{config.name}_{panel}.events.json"
            text = json.dumps(_events_payload(spec, events),
                              sort_keys=True, indent=2) + "\n"
            files[ev_path.name] = _write_text(ev_path, text)
        _write_meta(out_dir / f"{config.name}_{panel}.meta.json",
                    _meta(config, "evolve", panel, files, columns))
    return EXIT_OK


def cmd_sweep(config: RunConfig, out_dir, threads):
    config.check_command("sweep")
    out_dir.mkdir(parents=True, exist_ok=True)
    for panel, spec in config.sweep_specs("sweep"):
        result = run_max_concurrence(spec, threads=threads)
        cell_cols = _cell_columns(spec)
        columns = list(cell_cols)
        for mode in result.modes:
            columns.append(f"max_C_{_MODE_SUFFIX[mode]}")
            columns.append(f"tau_max_{_MODE_SUFFIX[mode]}")
        rows = []
        for ci, cell in enumerate(result.cells):
            row = [_fmt(cell[name]) for name in cell_cols]
            for mi in range(len(result.modes)):
                row.append(_fmt(result.max_concurrence[ci, mi]))
                row.append(_fmt(result.max_time[ci, mi]))
            rows.append(row)
        files = {}
        csv_path = out_dir / f"{config.name}_{panel}.csv"
        files[csv_path.name] = _write_text(csv_path, _csv(columns, rows))
        if "events" in spec.outputs:
            events = run_events(spec, threads=threads)
            ev_path = out_dir / f"{config.name}_{panel}.events.json"
            text = json.dumps(_events_payload(spec, events),
                              sort_keys=True, indent=2) + "\n"
            files[ev_path.name] = _write_text(ev_path, text)
        _write_meta(out_dir / f"{config.name}_{panel}.meta.json",
                    _meta(config, "sweep", panel, files, columns))
    return EXIT_OK


def cmd_region(config: RunConfig, out_dir, threads):
    config.check_command("region")
    out_dir.mkdir(parents=True, exist_ok=True)
    for panel, spec in config.sweep_specs("region"):
        region = run_region_map(spec, threads=threads)
        columns = ["a_over_omega", "omega_L", "label"]
        rows = []
        for i, a in enumerate(region.a_values):
            for j, L in enumerate(region.L_values):
                rows.append([_fmt(a), _fmt(L), LABEL_NAMES[region.labels[i, j]]])
        csv_path = out_dir / f"{config.name}_{panel}_region.csv"
        digest = _write_text(csv_path, _csv(columns, rows))
        counts = region.counts()
        print(f"{config.name} {panel} [{region.criterion}]: "
              + ", ".join(f"{k}={v}" for k, v in counts.items()))
        _write_meta(out_dir / f"{config.name}_{panel}_region.meta.json",
                    _meta(config, "region", panel, {csv_path.name: digest},
                          columns, extra={"label_counts": counts,
                                          "criterion": region.criterion}))
    return EXIT_OK


_HANDLERS = {"coeffs": cmd_coeffs, "evolve": cmd_evolve,
             "sweep": cmd_sweep, "region": cmd_region}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atompair",
        description="Entanglement dynamics of a uniformly accelerated pair of "
                    "two-level atoms, with a static thermal-bath comparison.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (("coeffs", "print/write the dissipator coefficient table"),
                      ("evolve", "concurrence and population curves over time"),
                      ("sweep", "maximum concurrence over a parameter axis"),
                      ("region", "event classification over the (a, L) plane")):
        p = sub.add_parser(name, help=doc)
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--config", type=Path, help="YAML run configuration")
        group.add_argument("--preset", type=str,
                           help=f"shipped preset name ({', '.join(preset_names())})")
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output directory (default: ./out)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for grid cells (default: 1)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {ns.threads}")
        config = load_preset(ns.preset) if ns.preset else load_config(ns.config)
        handler = _HANDLERS[ns.command]
        return handler(config, ns.out, ns.threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AtompairError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
