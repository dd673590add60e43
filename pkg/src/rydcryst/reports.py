"""Run configuration and report emission for the command line.

Input resolution: a named preset or a JSON file (either the flat
ExperimentalParams fields, or ``{"params": {...}, "settings": {...}}``),
then ``key=value`` overrides on top.  Output: CSV for curves and JSON for
structured results, every file stamped with a provenance header (package
and library versions, 12-hex config digest, seed) and written atomically
via a temp file in the target directory.

With a fixed seed and ``timestamp=False`` outputs are byte-identical
across runs; the timestamp line is the only non-deterministic content.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np
import scipy

from . import __version__
from .params import ExperimentalParams, ParameterError
from .presets import get_preset

__all__ = [
    "RunConfig",
    "ResolvedRun",
    "resolve_run",
    "config_digest",
    "write_csv",
    "write_json",
    "format_float",
]

SCHEMA_VERSION = 1

_INT_SETTINGS = {"n_sites", "n_max", "theta_points", "z_points",
                 "protocol_samples", "seed"}
_STR_SETTINGS = {"method", "boundary"}


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation, before input resolution."""

    subcommand: str
    preset: str | None = None
    input_path: str | None = None
    out_dir: str = "."
    overrides: tuple = ()
    seed: int = 1234
    strict: bool = False
    timestamp: bool = True
    si_primary: bool = False
    verbosity: int = 0

    def __post_init__(self):
        if self.subcommand not in ("params", "kparam", "lattice", "quench",
                                   "feasibility"):
            raise ParameterError(f"unknown subcommand {self.subcommand!r}")
        if (self.preset is None) == (self.input_path is None):
            raise ParameterError(
                "exactly one of a named preset or an input file is required"
            )


@dataclass(frozen=True)
class ResolvedRun:
    """Config after preset/file loading and override application."""

    config: RunConfig
    params: ExperimentalParams
    settings: dict
    digest: str
    source: str


def _parse_override(item: str):
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ParameterError(f"override {item!r} is not of the form key=value")
    raw = raw.strip()
    if key in _STR_SETTINGS:
        return key, raw
    try:
        value = float(raw)
    except ValueError:
        raise ParameterError(
            f"override {item!r}: {raw!r} is not a number"
        ) from None
    if key in _INT_SETTINGS:
        return key, int(value)
    return key, value


def resolve_run(config: RunConfig) -> ResolvedRun:
    """Apply preset/file input plus overrides; compute the config digest."""
    if config.preset is not None:
        preset = get_preset(config.preset)
        params = preset.params
        settings = dict(preset.settings)
        source = f"preset:{preset.name}"
    else:
        try:
            with open(config.input_path, encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise ParameterError(f"cannot read input file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParameterError(f"input file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ParameterError("input file must hold a JSON object")
        if "params" in data:
            params = ExperimentalParams.from_dict(data["params"])
            settings = dict(data.get("settings", {}))
        else:
            params = ExperimentalParams.from_dict(data)
            settings = {}
        source = f"file:{os.path.basename(config.input_path)}"

    param_fields = {f.name for f in dataclasses.fields(ExperimentalParams)}
    for item in config.overrides:
        key, value = _parse_override(item)
        if key in param_fields:
            params = params.replace(**{key: value})
        else:
            settings[key] = value

    digest = config_digest(config, params, settings)
    return ResolvedRun(config=config, params=params, settings=settings,
                       digest=digest, source=source)


def config_digest(config: RunConfig, params: ExperimentalParams,
                  settings: dict) -> str:
    """12-hex digest of the fully resolved run (params + settings + seed)."""
    payload = {
        "subcommand": config.subcommand,
        "params": params.to_dict(),
        "settings": {k: settings[k] for k in sorted(settings)},
        "seed": config.seed,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def format_float(value) -> str:
    """Stable float rendering for CSV bodies ('.12g', nan/inf spelled out)."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".12g")
    return str(value)


def provenance_lines(run: ResolvedRun, schema: str) -> list[str]:
    lines = [
        f"# rydcryst {__version__} (numpy {np.__version__}, scipy {scipy.__version__})",
        f"# schema: {schema} v{SCHEMA_VERSION}",
        f"# source: {run.source}  config: sha256:{run.digest}  seed: {run.config.seed}",
    ]
    if run.config.timestamp:
        stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        lines.append(f"# generated: {stamp}")
    return lines


def provenance_dict(run: ResolvedRun, schema: str) -> dict:
    info = {
        "package": f"rydcryst {__version__}",
        "libraries": {"numpy": np.__version__, "scipy": scipy.__version__},
        "schema": f"{schema} v{SCHEMA_VERSION}",
        "source": run.source,
        "config_sha256_12": run.digest,
        "seed": run.config.seed,
    }
    if run.config.timestamp:
        info["generated"] = datetime.now(timezone.utc).strftime(
            "%Y-%m-%dT%H:%M:%SZ"
        )
    return info


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_csv(path: str, run: ResolvedRun, schema: str, columns: list[str],
              rows) -> None:
    """Emit a provenance-stamped CSV, atomically."""
    lines = provenance_lines(run, schema)
    lines.append(",".join(columns))
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(
                f"row width {len(row)} does not match {len(columns)} columns"
            )
        lines.append(",".join(format_float(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, run: ResolvedRun, schema: str, payload: dict) -> None:
    """Emit a provenance-stamped JSON report, atomically."""
    document = {"provenance": provenance_dict(run, schema)}
    document.update(payload)
    _atomic_write(path, json.dumps(document, indent=2, sort_keys=True,
                                   default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return dataclasses.asdict(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")
