"""Batch front end: config files in, CSV artifacts out.

Config files are flat ``key = value`` text with ``#`` comments.  Every
frequency needs an explicit unit suffix (GHz/MHz/kHz/Hz), times are in
us.  Unknown keys, missing units and negative rates are rejected with
the offending key named.  All dynamics are deterministic; reruns with
the same config produce byte-identical CSVs (floats serialized with 12
significant digits).  The ``--seedless`` flag merely documents that no
RNG exists anywhere in the pipeline.

Subcommands: transfer, sweep, pitch-catch, strain-map, nuclear-swap,
ms-gate.  Each writes its CSVs plus ``manifest.json`` recording the
fully resolved configuration, headline results, and the tool version.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from .units import FREQ_UNITS, TIME_UNITS, freq_to_mhz, time_to_us

PROTOCOLS = ("transfer", "sweep", "pitch-catch", "strain-map",
             "nuclear-swap", "ms-gate")

_LENGTH_TO_M = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class Field:
    kind: str                  # freq | rate | time | length | speed | int | float | bool | str
    default: object            # None means required
    optional: bool = False     # may resolve to None (auto)


SCHEMAS: dict[str, dict[str, Field]] = {
    "transfer": {
        "f_carrier": Field("freq", 2000.0),
        "g_scp": Field("rate", 50.0),
        "g_pe": Field("rate", 1.0),
        "gamma_sc": Field("rate", 0.01),
        "gamma_p": Field("rate", 1e-4),
        "gamma_e": Field("rate", 0.01),
        "n_max": Field("int", 3),
        "input": Field("str", "excited"),
        "optimize": Field("bool", True),
        "dtau": Field("time", None, optional=True),
    },
    "sweep": {
        "f_carrier": Field("freq", 2000.0),
        "g_scp": Field("rate", 50.0),
        "gamma_sc": Field("rate", 0.01),
        "gamma_p": Field("rate", 1e-4),
        "n_max": Field("int", 3),
        "g_pe_min": Field("rate", 0.1),
        "g_pe_max": Field("rate", 10.0),
        "g_pe_points": Field("int", 20),
        "gamma_e_min": Field("rate", 1e-3),
        "gamma_e_max": Field("rate", 1e-1),
        "gamma_e_points": Field("int", 20),
    },
    "pitch-catch": {
        "length": Field("length", 6.0e-4),
        "speed": Field("speed", 1000.0),
        "n0": Field("int", 2400),
        "modes": Field("int", 201),
        "g_qm": Field("rate", 1.0),
        "tau_pc": Field("time", None, optional=True),
        "phi": Field("float", float(np.pi)),
        "transmission": Field("float", 1.0),
        "gamma_sc": Field("rate", 0.0),
        "gamma_p": Field("rate", 0.0),
        "n_max": Field("int", 3),
        "snapshot_fraction": Field("float", 0.5),
    },
    "strain-map": {
        "field_csv": Field("str", None),
        "normalization": Field("float", 1.0),
        "d": Field("freq", 1.0e9),
        "f": Field("freq", 1.0e9),
        "t_parallel": Field("freq", 1.0e9),
        "t_perp": Field("freq", 1.0e9),
    },
    "nuclear-swap": {
        "a_parallel": Field("rate", 0.5),
        "omega_mw": Field("rate", 3.9e-3),
        "gamma_e": Field("rate", 0.01),
        "gamma_n": Field("rate", 1e-6),
        "input": Field("str", "superposition"),
    },
    "ms-gate": {
        "f_e": Field("freq", 2000.0),
        "f_p": Field("freq", 2002.0),
        "g_eff0": Field("rate", 5.4406),
        "delta_ms": Field("freq", 20.0),
        "gamma_e": Field("rate", 0.0),
        "gamma_p": Field("rate", 0.0),
        "n_max": Field("int", 5),
        "t_end": Field("time", None, optional=True),
    },
}

_CANONICAL_UNIT = {"freq": "MHz", "rate": "MHz", "time": "us",
                   "length": "m", "speed": "m/s"}


@dataclass
class RunConfig:
    protocol: str
    params: dict

    def canonical_lines(self) -> list[str]:
        lines = [f"protocol = {self.protocol}"]
        for key in sorted(self.params):
            value = self.params[key]
            kind = SCHEMAS[self.protocol][key].kind
            if value is None:
                lines.append(f"{key} = auto")
            elif kind in _CANONICAL_UNIT:
                lines.append(f"{key} = {_fmt(value)} {_CANONICAL_UNIT[kind]}")
            elif kind == "bool":
                lines.append(f"{key} = {'true' if value else 'false'}")
            else:
                lines.append(f"{key} = {value}")
        return lines


def _parse_value(key: str, raw: str, field: Field):
    raw = raw.strip()
    if field.optional and raw.lower() in ("auto", "none"):
        return None
    kind = field.kind
    if kind in ("freq", "rate", "time", "length", "speed"):
        parts = raw.split()
        if len(parts) != 2:
            raise ValueError(
                f"key {key!r}: expected '<number> <unit>', got {raw!r}"
            )
        try:
            value = float(parts[0])
        except ValueError:
            raise ValueError(f"key {key!r}: bad number {parts[0]!r}") from None
        unit = parts[1]
        if kind in ("freq", "rate"):
            if unit not in FREQ_UNITS:
                raise ValueError(
                    f"key {key!r}: unknown frequency unit {unit!r} "
                    f"(use one of {FREQ_UNITS})"
                )
            value = freq_to_mhz(value, unit)
            if kind == "rate" and value < 0:
                raise ValueError(f"key {key!r}: rate must be nonnegative")
            return value
        if kind == "time":
            if unit not in TIME_UNITS:
                raise ValueError(f"key {key!r}: unknown time unit {unit!r}")
            return time_to_us(value, unit)
        if kind == "length":
            if unit not in _LENGTH_TO_M:
                raise ValueError(f"key {key!r}: unknown length unit {unit!r}")
            return value * _LENGTH_TO_M[unit]
        if unit != "m/s":
            raise ValueError(f"key {key!r}: speed must carry 'm/s'")
        return value
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "bool":
        if raw.lower() in ("true", "yes", "1"):
            return True
        if raw.lower() in ("false", "no", "0"):
            return False
        raise ValueError(f"key {key!r}: bad boolean {raw!r}")
    return raw


def parse_config(path, protocol: Optional[str] = None) -> RunConfig:
    """Read and validate a key=value config file against a protocol schema."""
    text = Path(path).read_text(encoding="utf-8")
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key in entries:
            raise ValueError(f"duplicate key {key!r}")
        entries[key] = raw.strip()

    declared = entries.pop("protocol", None)
    if protocol is None:
        protocol = declared
    elif declared is not None and declared != protocol:
        raise ValueError(
            f"config declares protocol {declared!r} but {protocol!r} was requested"
        )
    if protocol not in SCHEMAS:
        raise ValueError(f"unknown protocol {protocol!r}; pick one of {PROTOCOLS}")

    schema = SCHEMAS[protocol]
    params = {}
    for key, raw in entries.items():
        if key not in schema:
            raise ValueError(f"unknown key {key!r} for protocol {protocol!r}")
        params[key] = _parse_value(key, raw, schema[key])
    for key, field in schema.items():
        if key not in params:
            if field.default is None and not field.optional:
                raise ValueError(f"missing required key {key!r}")
            params[key] = field.default
    return RunConfig(protocol=protocol, params=params)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parsing it back yields an equal config."""
    return "\n".join(cfg.canonical_lines()) + "\n"


# --- CSV helpers --------------------------------------------------------------

def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_manifest(out_dir: Path, cfg: RunConfig, results: dict) -> None:
    manifest = {
        "tool": "phononbus",
        "version": __version__,
        "protocol": cfg.protocol,
        "config": cfg.canonical_lines(),
        "results": results,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _input_state(name: str) -> np.ndarray:
    from . import transduction as td

    states = {
        "excited": td.excited_state,
        "ground": td.ground_state,
        "superposition": td.superposition_state,
    }
    if name not in states:
        raise ValueError(f"unknown input state {name!r}; pick from {sorted(states)}")
    return states[name]()


# --- protocol runners ----------------------------------------------------------

def _run_transfer(cfg: RunConfig, out_dir: Path, workers: int) -> dict:
    from . import transduction as td

    p = cfg.params
    chain = td.DirectChainConfig(
        f_sc=p["f_carrier"] * 1e-3, f_p=p["f_carrier"] * 1e-3,
        f_e=p["f_carrier"] * 1e-3,
        g_scp_amp=p["g_scp"], g_pe_amp=p["g_pe"],
        gamma_sc=p["gamma_sc"], gamma_p=p["gamma_p"], gamma_e=p["gamma_e"],
        n_max=p["n_max"], initial_state=_input_state(p["input"]),
    )
    if p["optimize"]:
        dtau, _ = td.optimize_delay(chain)
    elif p["dtau"] is not None:
        dtau = p["dtau"]
    else:
        dtau = chain.tau_pe - chain.tau_scp
    chain = replace(chain, tau_pe=chain.tau_scp + dtau)
    traj, fidelity = td.run_transfer(chain)
    rows = zip(traj.times, traj.observables["pop_sc"],
               traj.observables["pop_ph"], traj.observables["pop_spin"])
    _write_csv(out_dir / "populations.csv",
               ["t_us", "pop_sc", "pop_ph", "pop_spin"], rows)
    return {"fidelity": _fmt(fidelity), "dtau_us": _fmt(dtau),
            "infidelity": _fmt(1.0 - fidelity)}


def _run_sweep(cfg: RunConfig, out_dir: Path, workers: int) -> dict:
    from . import transduction as td

    p = cfg.params
    chain = td.DirectChainConfig(
        f_sc=p["f_carrier"] * 1e-3, f_p=p["f_carrier"] * 1e-3,
        f_e=p["f_carrier"] * 1e-3,
        g_scp_amp=p["g_scp"], gamma_sc=p["gamma_sc"], gamma_p=p["gamma_p"],
        n_max=p["n_max"],
    )
    g_grid = np.geomspace(p["g_pe_min"], p["g_pe_max"], p["g_pe_points"])
    gamma_grid = np.geomspace(p["gamma_e_min"], p["gamma_e_max"],
                              p["gamma_e_points"])
    result = td.sweep(chain, g_grid, gamma_grid, workers=workers)
    rows = []
    for i, g in enumerate(result.g_pe_mhz):
        for j, ge in enumerate(result.gamma_e_mhz):
            rows.append((g, ge * 1e3, result.fidelity[i, j],
                         result.log10_infidelity[i, j], result.dtau_us[i, j]))
    _write_csv(out_dir / "fidelity_grid.csv",
               ["g_pe_MHz", "gamma_e_kHz", "F", "log10_infidelity", "dtau_us"],
               rows)
    return {
        "cells": str(result.fidelity.size),
        "best_fidelity": _fmt(float(result.fidelity.max())),
        "worst_fidelity": _fmt(float(result.fidelity.min())),
    }


def _run_pitch_catch(cfg: RunConfig, out_dir: Path, workers: int) -> dict:
    from . import pitchcatch as pc

    p = cfg.params
    wg = pc.WaveguideConfig(
        L=p["length"], c=p["speed"], N0=p["n0"], M=p["modes"],
        g_qm=p["g_qm"], tau_pc=p["tau_pc"], phi=p["phi"],
        transmission=p["transmission"],
    )
    traj = pc.simulate_schrodinger(wg)
    rows = zip(traj.times, traj.observables["pop_sc"],
               traj.observables["pop_wg"], traj.observables["pop_ph"])
    _write_csv(out_dir / "populations.csv",
               ["t_us", "pop_sc", "pop_wg", "pop_ph"], rows)

    # release-only run for the in-flight packet snapshot
    frac = p["snapshot_fraction"]
    t_snap = wg.tau_pc + frac * wg.flight_time
    release = pc.simulate_schrodinger(wg, catch_on=False, t_end=t_snap,
                                      save_states=True)
    x, intensity = pc.wavepacket_snapshot(release.states[-1], wg)
    _write_csv(out_dir / "packet.csv", ["x_m", "intensity"],
               zip(x, intensity))

    casc = pc.simulate_cascaded(wg, gamma_sc=p["gamma_sc"],
                                gamma_p=p["gamma_p"], n_max=p["n_max"])
    discrepancy = pc.cross_validate(wg)
    return {
        "final_phonon_population": _fmt(traj.observables["pop_ph"][-1]),
        "cascaded_final_phonon": _fmt(casc.observables["pop_ph"][-1]),
        "model_discrepancy": _fmt(discrepancy),
    }


def _run_strain_map(cfg: RunConfig, out_dir: Path, workers: int) -> dict:
    from . import strain

    p = cfg.params
    if not p["field_csv"]:
        raise ValueError("strain-map needs field_csv = <path>")
    constants = strain.SusceptibilityConstants(
        t_parallel=p["t_parallel"] * 1e6, t_perp=p["t_perp"] * 1e6,
        d=p["d"] * 1e6, f=p["f"] * 1e6,
    )
    samples = strain.load_strain_samples(p["field_csv"])
    entries, peak = strain.coupling_map(samples, constants, p["normalization"])
    strain.write_coupling_map(out_dir / "coupling_map.csv", entries)
    return {"samples": str(len(entries)), "max_g_orb_MHz": _fmt(peak / 1e6)}


def _run_nuclear_swap(cfg: RunConfig, out_dir: Path, workers: int) -> dict:
    from . import nuclear

    p = cfg.params
    hf = nuclear.HyperfineConfig(
        A_parallel=p["a_parallel"] * 1e3, Omega_mw=p["omega_mw"] * 1e3,
        gamma_e=p["gamma_e"] * 1e3, gamma_n=p["gamma_n"] * 1e6,
    )
    _, f_en, records = nuclear.swap_protocol(hf, _input_state(p["input"]))
    rows = [(r.index, r.duration, r.fidelity_running) for r in records]
    _write_csv(out_dir / "gates.csv",
               ["gate_index", "duration_us", "F_running"], rows)
    return {
        "fidelity": _fmt(f_en),
        "total_time_us": _fmt(nuclear.total_protocol_time(hf)),
    }


def _run_ms_gate(cfg: RunConfig, out_dir: Path, workers: int) -> dict:
    from . import msgate

    p = cfg.params
    ms = msgate.MSConfig(
        f_e=p["f_e"] * 1e-3, f_p=p["f_p"] * 1e-3,
        g_eff0=p["g_eff0"], delta_ms=p["delta_ms"],
        gamma_e=p["gamma_e"], gamma_p=p["gamma_p"],
        n_max=p["n_max"], t_end=p["t_end"],
    )
    traj = msgate.simulate(ms)
    rows = zip(traj.times, traj.observables["n_gg"],
               traj.observables["n_ee"], traj.observables["ideal"])
    _write_csv(out_dir / "dynamics.csv", ["t_us", "n_gg", "n_ee", "ideal"], rows)
    bell = msgate.bell_state_fidelity(ms)
    return {"g_ms_MHz": _fmt(ms.g_ms_mhz), "bell_fidelity": _fmt(bell)}


_RUNNERS: dict[str, Callable] = {
    "transfer": _run_transfer,
    "sweep": _run_sweep,
    "pitch-catch": _run_pitch_catch,
    "strain-map": _run_strain_map,
    "nuclear-swap": _run_nuclear_swap,
    "ms-gate": _run_ms_gate,
}


def run(cfg: RunConfig, out_dir, workers: int = 1) -> dict:
    """Execute a protocol; writes CSVs plus manifest.json into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = _RUNNERS[cfg.protocol](cfg, out, workers)
    _write_manifest(out, cfg, results)
    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="phononbus",
        description="Acoustic-bus quantum state-transfer simulations",
    )
    sub = parser.add_subparsers(dest="protocol", required=True)
    for name in PROTOCOLS:
        p = sub.add_parser(name, help=f"run the {name} protocol")
        p.add_argument("--config", type=str, default=None,
                       help="key=value config file (defaults apply if omitted)")
        p.add_argument("--out", type=str, required=True, help="output directory")
        p.add_argument("--workers", type=int, default=1,
                       help="worker processes for sweep cells")
        p.add_argument("--seedless", action="store_true",
                       help="documents that the pipeline uses no RNG (no-op)")
    args = parser.parse_args(argv)

    try:
        if args.config:
            cfg = parse_config(args.config, args.protocol)
        else:
            cfg = RunConfig(
                protocol=args.protocol,
                params={k: f.default for k, f in SCHEMAS[args.protocol].items()},
            )
        results = run(cfg, args.out, workers=args.workers)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for key, value in results.items():
        print(f"{key}: {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
