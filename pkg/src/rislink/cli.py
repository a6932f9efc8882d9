"""Command-line front end: presets, config files, CSV/TSV emission.

Config files are flat ``key = value`` documents (``#`` comments allowed);
unknown keys are rejected by name and missing keys fall back to preset
defaults.  Output is plot-ready CSV with a fixed header and deterministic
row order, preceded by one ``# config_digest=...`` metadata comment so a
parsed file reproduces the CurveSet exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import re
import sys
from dataclasses import replace
from typing import Dict, Optional, Sequence, Tuple

from .channel import ArrayGeometry
from .metrics import InterferenceGeometry, LinkBudget
from .montecarlo import Curve, CurveSet, run_experiment
from .scenarios import (
    BOTH,
    MODES,
    PRESETS,
    SCENARIO_DEFAULT_PRESET,
    SCENARIOS,
    ConfigError,
    ScenarioConfig,
)

CSV_HEADER = ["scenario", "curve", "x", "mean_rate", "stderr", "trials", "seed"]
_DELIMS = {"csv": ",", "tsv": "\t"}

EXIT_CONFIG = 3
EXIT_IO = 4
EXIT_INTERNAL = 70


# ---------------------------------------------------------------------------
# config document parsing
# ---------------------------------------------------------------------------

def _parse_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("on", "true", "1", "yes"):
        return True
    if v in ("off", "false", "0", "no"):
        return False
    raise ConfigError(f"expected on/off, got {value!r}")


def _parse_geometry(value: str) -> ArrayGeometry:
    """Geometry syntax: ``ula:N[:spacing]`` or ``upa:NXxNY[:spacing]``."""
    parts = value.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "ula" and len(parts) in (2, 3):
            spacing = float(parts[2]) if len(parts) == 3 else 0.5
            return ArrayGeometry.ula(int(parts[1]), spacing)
        if kind == "upa" and len(parts) in (2, 3):
            nx, ny = (int(p) for p in parts[1].lower().split("x"))
            spacing = float(parts[2]) if len(parts) == 3 else 0.5
            return ArrayGeometry.upa(nx, ny, spacing)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad geometry {value!r}: {exc}") from exc
    raise ConfigError(f"bad geometry {value!r}: expected ula:N or upa:NXxNY")


def _parse_geometry_list(value: str) -> Tuple[ArrayGeometry, ...]:
    return tuple(_parse_geometry(v) for v in value.split(",") if v.strip())


def _parse_str_list(value: str) -> Tuple[str, ...]:
    return tuple(v.strip().lower() for v in value.split(",") if v.strip())


def _parse_float_list(value: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in value.split(",") if v.strip())


def _parse_width_table(value: str) -> Tuple[Tuple[float, float], ...]:
    """Width table syntax: ``bound:width, bound:width`` (radians)."""
    rows = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            bound, width = (float(p) for p in item.split(":"))
        except ValueError as exc:
            raise ConfigError(f"bad width table row {item!r}: expected bound:width") from exc
        rows.append((bound, width))
    return tuple(rows)


# key -> (value parser, config field); budget / interference-geometry keys
# are handled separately because they rebuild nested objects
_SIMPLE_KEYS = {
    "scenario": (str.lower, "scenario"),
    "mode": (str.lower, "mode"),
    "trials": (int, "trials"),
    "seed": (int, "seed"),
    "carrier_freq": (float, "carrier_freq"),
    "channel_model": (str.lower, "channel_model"),
    "normalize": (_parse_bool, "normalize"),
    "ue_antennas": (int, "ue_antennas"),
    "nb_geometry": (_parse_geometry, "nb_geometry"),
    "ris_sweep": (_parse_geometry_list, "ris_sweep"),
    "n_branches": (int, "n_branches"),
    "jt_variants": (_parse_str_list, "jt_variants"),
    "n_ues": (int, "n_ues"),
    "ofdma": (_parse_bool, "ofdma"),
    "pa_phase_steps": (int, "pa_phase_steps"),
    "pa_amp_steps": (int, "pa_amp_steps"),
    "beta_values": (_parse_float_list, "beta_values"),
    "blocking_output": (str.lower, "blocking_output"),
    "interference_cases": (_parse_str_list, "interference_cases"),
}
_BUDGET_KEYS = {"power": "power", "noise_var": "noise_var"}
_IGEOM_KEYS = {
    "interference_normal_angle": ("normal_angle", float),
    "interference_beam_width": ("beam_width", float),
    "interference_s0": ("s0", float),
    "interference_p_i0": ("p_i0", float),
    "interference_width_table": ("width_table", _parse_width_table),
}
KNOWN_KEYS = set(_SIMPLE_KEYS) | set(_BUDGET_KEYS) | set(_IGEOM_KEYS) | {"preset"}


def _read_document(text: str) -> Dict[str, Tuple[str, int]]:
    entries: Dict[str, Tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"parse error (line {lineno}): expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"parse error (line {lineno}): empty key or value")
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (line {lineno})")
        entries[key] = (value, lineno)
    return entries


def parse_config(text: str, preset: Optional[str] = None) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a key=value document.

    ``preset`` (or a ``preset`` key in the document) supplies defaults;
    explicit keys override them.  Unknown keys are rejected by name and
    the final config is validated, naming the violated invariant.
    """
    entries = _read_document(text)

    doc_preset = None
    if "preset" in entries:
        doc_preset, lineno = entries.pop("preset")
        if doc_preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {doc_preset!r} (line {lineno}), valid: {sorted(PRESETS)}")
    if preset is not None and preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}, valid: {sorted(PRESETS)}")
    if preset and doc_preset and preset != doc_preset:
        raise ConfigError(f"preset conflict: {preset!r} given but document says {doc_preset!r}")
    preset = preset or doc_preset

    unknown = [k for k in entries if k not in KNOWN_KEYS]
    if unknown:
        key = unknown[0]
        raise ConfigError(f"unknown key {key!r} (line {entries[key][1]})")

    if preset:
        config = PRESETS[preset]()
    else:
        if "scenario" not in entries:
            raise ConfigError("scenario: required when no preset is given")
        scenario = entries["scenario"][0].lower()
        if scenario not in SCENARIO_DEFAULT_PRESET:
            raise ConfigError(f"scenario: must be one of {SCENARIOS}, got {scenario!r}")
        config = PRESETS[SCENARIO_DEFAULT_PRESET[scenario]]()
        config = replace(config, preset=None)

    updates: Dict[str, object] = {}
    budget = {"power": config.budget.power, "noise_var": config.budget.noise_var}
    ig = config.interference_geometry
    igeom = {"normal_angle": ig.normal_angle, "beam_width": ig.beam_width,
             "s0": ig.s0, "p_i0": ig.p_i0, "width_table": ig.width_table}
    budget_touched = igeom_touched = False
    for key, (value, lineno) in entries.items():
        try:
            if key in _SIMPLE_KEYS:
                parser, attr = _SIMPLE_KEYS[key]
                updates[attr] = parser(value)
            elif key in _BUDGET_KEYS:
                budget[_BUDGET_KEYS[key]] = float(value)
                budget_touched = True
            else:
                attr, parser = _IGEOM_KEYS[key]
                igeom[attr] = parser(value)
                igeom_touched = True
        except ConfigError as exc:
            raise ConfigError(f"{key} (line {lineno}): {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{key} (line {lineno}): bad value {value!r} ({exc})") from exc

    try:
        if budget_touched:
            updates["budget"] = LinkBudget(**budget)
        if igeom_touched:
            updates["interference_geometry"] = InterferenceGeometry(**igeom)
        config = replace(config, **updates)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    config.validate()
    return config


# ---------------------------------------------------------------------------
# CSV emission and parsing
# ---------------------------------------------------------------------------

def _fmt_number(v) -> str:
    if float(v).is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(float(v))


def emit_csv(curves: CurveSet, destination=None, fmt: str = "csv") -> bytes:
    """Serialize a CurveSet; returns the bytes and optionally writes them.

    Header ``scenario,curve,x,mean_rate,stderr,trials,seed``, one row per
    (curve, x), rows ordered by curve label then x ascending, floats at
    full round-trip precision.  A single leading ``# config_digest=``
    comment carries the config digest.
    """
    if fmt not in _DELIMS:
        raise ValueError(f"format must be one of {sorted(_DELIMS)}, got {fmt!r}")
    buf = io.StringIO()
    buf.write(f"# config_digest={curves.config_digest}\n")
    writer = csv.writer(buf, delimiter=_DELIMS[fmt], lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for curve in curves.curves:
        for x, mean, err in zip(curve.x, curve.mean, curve.stderr):
            writer.writerow([curves.scenario, curve.label, _fmt_number(x),
                             repr(float(mean)), repr(float(err)),
                             str(curve.trials), str(curves.seed)])
    data = buf.getvalue().encode()
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(data)
        else:
            with open(destination, "wb") as fh:
                fh.write(data)
    return data


_INT_RE = re.compile(r"^-?\d+$")


def _parse_number(s: str):
    return int(s) if _INT_RE.match(s) else float(s)


def parse_csv(data, fmt: str = "csv") -> CurveSet:
    """Inverse of emit_csv: rebuild the CurveSet from its serialized form."""
    if fmt not in _DELIMS:
        raise ValueError(f"format must be one of {sorted(_DELIMS)}, got {fmt!r}")
    text = data.decode() if isinstance(data, (bytes, bytearray)) else data
    digest = ""
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            stripped = line.lstrip("#").strip()
            if stripped.startswith("config_digest="):
                digest = stripped.split("=", 1)[1]
            continue
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty curve file")
    rows = list(csv.reader(lines, delimiter=_DELIMS[fmt]))
    if rows[0] != CSV_HEADER:
        raise ValueError(f"bad header {rows[0]!r}, expected {CSV_HEADER!r}")
    scenario = seed = None
    grouped: Dict[str, dict] = {}
    for row in rows[1:]:
        if len(row) != len(CSV_HEADER):
            raise ValueError(f"bad row {row!r}: expected {len(CSV_HEADER)} fields")
        scen, label, x, mean, err, trials, row_seed = row
        if scenario is None:
            scenario, seed = scen, int(row_seed)
        elif scen != scenario or int(row_seed) != seed:
            raise ValueError("rows mix scenarios or seeds")
        entry = grouped.setdefault(label, {"x": [], "mean": [], "stderr": [], "trials": int(trials)})
        if int(trials) != entry["trials"]:
            raise ValueError(f"curve {label!r} mixes trial counts")
        entry["x"].append(_parse_number(x))
        entry["mean"].append(float(mean))
        entry["stderr"].append(float(err))
    curves = tuple(
        Curve(label, tuple(e["x"]), tuple(e["mean"]), tuple(e["stderr"]), e["trials"])
        for label, e in grouped.items())
    return CurveSet(scenario, seed, digest, curves)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="path to a key=value config document")
    p.add_argument("--preset", choices=sorted(PRESETS), help="start from a bundled preset")
    p.add_argument("--seed", type=int, help="override the experiment seed")
    p.add_argument("--trials", type=int, help="override the trial count per point")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=sorted(_DELIMS), default="csv")
    p.add_argument("--ofdma", choices=["on", "off"], help="toggle orthogonal multi-user access")
    p.add_argument("--mode", choices=[m for m in MODES if m != BOTH],
                   help="report only network-controlled or only standalone curves")
    p.add_argument("--workers", type=int, default=1, help="parallel trial workers")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rislink",
        description="Link-level Monte Carlo experiments for surface-assisted networks")
    sub = parser.add_subparsers(dest="command", required=True)
    preset_cmd = sub.add_parser("preset", help="run a bundled preset by name")
    preset_cmd.add_argument("name", choices=sorted(PRESETS))
    _add_common_flags(preset_cmd)
    for scenario in SCENARIOS:
        cmd = sub.add_parser(scenario, help=f"run the {scenario} scenario")
        _add_common_flags(cmd)
    return parser


def _resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    preset = getattr(args, "name", None) or args.preset
    text = ""
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise exc
    if preset is None and args.command != "preset" and "preset" not in _read_document(text):
        preset = SCENARIO_DEFAULT_PRESET[args.command]
    config = parse_config(text, preset=preset)
    if args.command != "preset" and config.scenario != args.command:
        raise ConfigError(
            f"scenario: config resolves to {config.scenario!r} but the "
            f"{args.command!r} subcommand was used")
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.ofdma is not None:
        overrides["ofdma"] = args.ofdma == "on"
    if args.mode is not None:
        overrides["mode"] = args.mode
    if overrides:
        config = replace(config, **overrides)
        config.validate()
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        curves = run_experiment(config, workers=args.workers)
        if args.out:
            emit_csv(curves, args.out, fmt=args.format)
        else:
            sys.stdout.buffer.write(emit_csv(curves, fmt=args.format))
            sys.stdout.buffer.flush()
    except ConfigError as exc:
        print(f"rislink: error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"rislink: error: io: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"rislink: error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - defensive
        print(f"rislink: error: internal: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
