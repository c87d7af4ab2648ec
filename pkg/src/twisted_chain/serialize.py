"""JSON and CSV output with a provenance header; numbers at 12 significant digits."""
from __future__ import annotations

import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .errors import OutputError

DIGITS = 12


def sig(x):
    """Round a float to 12 significant digits (ints and strings pass through)."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(f"{x:.{DIGITS}g}") if np.isfinite(x) else None
    if isinstance(x, (complex, np.complexfloating)):
        return [sig(x.real), sig(x.imag)]
    if isinstance(x, dict):
        return {k: sig(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [sig(v) for v in x]
    return x


def provenance(command: str, params: dict, tolerances: dict | None = None) -> dict:
    return {"artifact": "twisted-chain", "version": __version__, "command": command,
            "parameters": sig(params), "tolerances": sig(tolerances or {})}


def _open(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def write_json(path, header: dict, body: dict):
    fh, close = _open(path)
    try:
        json.dump({"provenance": header, **sig(body)}, fh, indent=1)
        fh.write("\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    finally:
        if close:
            fh.close()


def write_csv(path, header: dict, columns, rows):
    fh, close = _open(path)
    try:
        for line in json.dumps(header, indent=None).splitlines():
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([f"{v:.{DIGITS}g}" if isinstance(v, (float, np.floating)) else v for v in row])
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    finally:
        if close:
            fh.close()


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc


def read_csv(text: str):
    """Parse CSV text written by write_csv (comment header skipped)."""
    lines = [ln for ln in io.StringIO(text) if not ln.startswith("#")]
    return list(csv.reader(lines))
