"""File formats: wide panel CSV with a JSON sidecar, and JSON configs.

Floats are written with ``repr`` (shortest round-trip decimal), so reading
a file back reproduces the in-memory arrays bit for bit.
"""
from __future__ import annotations

import csv
import json
import os

import numpy as np

from .errors import ParameterError
from .model import Panel, PanelConfig

__all__ = [
    "sidecar_path",
    "write_panel_csv",
    "read_panel_csv",
    "read_sidecar",
    "load_panel",
    "read_panel_config",
    "write_panel_config",
]


class FormatError(ParameterError):
    """A file does not follow the documented layout."""


def sidecar_path(csv_path) -> str:
    base, _ = os.path.splitext(str(csv_path))
    return base + ".json"


def write_panel_csv(panel: Panel, path, *, sidecar: bool = True) -> None:
    """Write ``t,s1,...,sN`` rows (one per time index, ``t`` from 1)."""
    values = panel.values
    N, T = values.shape
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", *(f"s{i + 1}" for i in range(N))])
        for t in range(T):
            w.writerow([t + 1, *map(repr, values[:, t].tolist())])
    if sidecar:
        meta = {"config": panel.config.to_dict()}
        if panel.true_coeffs is not None:
            meta["true_coeffs"] = panel.true_coeffs.tolist()
        with open(sidecar_path(path), "w") as fh:
            json.dump(meta, fh, indent=2)


def read_panel_csv(path) -> np.ndarray:
    """Return the N x T matrix stored in a wide panel CSV."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: empty file")
    header = rows[0]
    if not header or header[0] != "t" or any(h != f"s{i}" for i, h in enumerate(header[1:], 1)):
        raise FormatError(f"{path}: header must be t,s1,...,sN")
    N = len(header) - 1
    if N < 1 or len(rows) < 3:
        raise FormatError(f"{path}: need at least one series and two time points")
    try:
        data = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    except ValueError as exc:
        raise FormatError(f"{path}: non-numeric entry ({exc})") from None
    if data.shape != (len(rows) - 1, N):
        raise FormatError(f"{path}: ragged rows")
    if not np.all(np.isfinite(data)):
        raise FormatError(f"{path}: non-finite values")
    return np.ascontiguousarray(data.T)


def read_sidecar(csv_path) -> dict | None:
    p = sidecar_path(csv_path)
    if not os.path.exists(p):
        return None
    with open(p) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{p}: invalid JSON ({exc})") from None


def load_panel(path) -> Panel:
    """Panel from CSV plus its sidecar (which supplies the config)."""
    values = read_panel_csv(path)
    meta = read_sidecar(path)
    if meta is None:
        raise FormatError(f"{path}: sidecar {sidecar_path(path)} not found")
    cfg = PanelConfig.from_dict(meta["config"])
    return Panel(values=values, config=cfg, true_coeffs=meta.get("true_coeffs"))


def read_panel_config(path) -> PanelConfig:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from None
    return PanelConfig.from_dict(d)


def write_panel_config(config: PanelConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config.to_dict(), fh, indent=2)
