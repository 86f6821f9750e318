"""CSV, weight-file and manifest writers shared by the command-line tools."""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .metrics import to_db

#: bumped whenever a CSV layout changes
CSV_SCHEMA_VERSION = 1


def fmt(x) -> str:
    """Six significant digits; ``inf``/``-inf``/``nan`` spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6g}"


def power(x, linear: bool) -> str:
    return fmt(x if linear else to_db(x))


def write_csv(path, header, rows, kind: str):
    with open(path, "w", newline="") as fh:
        fh.write(f"# ucmvdr {kind} schema={CSV_SCHEMA_VERSION}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def read_csv(path):
    """Rows of a CSV written by :func:`write_csv` as dicts (comment line skipped)."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


class WeightsFileError(ValueError):
    pass


def write_weights(path, weights):
    """One complex weight per line as ``re im`` with full double precision."""
    with open(path, "w") as fh:
        for w in np.asarray(weights, dtype=complex):
            fh.write(f"{w.real:.17g} {w.imag:.17g}\n")


def read_weights(path) -> np.ndarray:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) != 2:
                raise WeightsFileError(f"{path}:{lineno}: expected 're im', got {line.strip()!r}")
            try:
                re_, im = float(parts[0]), float(parts[1])
            except ValueError:
                raise WeightsFileError(f"{path}:{lineno}: cannot parse {line.strip()!r}") from None
            if not (math.isfinite(re_) and math.isfinite(im)):
                raise WeightsFileError(f"{path}:{lineno}: non-finite weight {line.strip()!r}")
            out.append(complex(re_, im))
    if not out:
        raise WeightsFileError(f"{path}: no weights found")
    return np.array(out)


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    command: str
    config_hash: str
    base_seed: object = None
    tool_version: str = ""
    started: str = field(default_factory=_now)
    finished: str = ""
    files: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, path, out_dir):
        self.files.append(os.path.relpath(path, out_dir))
        return path

    def write(self, out_dir) -> str:
        from . import __version__

        self.tool_version = self.tool_version or __version__
        self.finished = _now()
        path = os.path.join(out_dir, "manifest.json")
        payload = {
            "command": self.command,
            "config_hash": self.config_hash,
            "base_seed": self.base_seed,
            "tool_version": self.tool_version,
            "started": self.started,
            "finished": self.finished,
            "files": sorted(self.files + ["manifest.json"]),
            **self.extra,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path
