"""CSV, PGM and PPM writers for snapshots and diagnostics."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .diagnostics import DiagnosticsRecord


def fmt(x) -> str:
    # 17 significant digits round-trips any double
    return format(float(x), ".17g")


def time_label(t: float) -> str:
    return format(float(t), "g")


def write_diagnostics_csv(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(DiagnosticsRecord.columns())
        for r in records:
            w.writerow([fmt(v) for v in r.values()])


def read_diagnostics_csv(path) -> list[DiagnosticsRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != DiagnosticsRecord.columns():
        raise ValueError(f"unexpected header in {path}: {rows[0]}")
    return [DiagnosticsRecord(*map(float, row)) for row in rows[1:]]


def write_field_csv(path, f: np.ndarray) -> None:
    """One line per grid row (fixed y), x varying along the line."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        for row in np.asarray(f):
            w.writerow([fmt(v) for v in row])


def read_field_csv(path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh)])


def normalise_8bit(f: np.ndarray) -> np.ndarray:
    """Min-max map to 0..255, rounding half up; a flat field maps to zeros."""
    f = np.asarray(f, dtype=float)
    lo, hi = float(f.min()), float(f.max())
    if hi == lo:
        return np.zeros(f.shape, dtype=np.uint8)
    return np.floor(255.0 * (f - lo) / (hi - lo) + 0.5).astype(np.uint8)


def write_pgm(path, f: np.ndarray) -> None:
    """Binary P5; the first image row is grid row 0 (smallest y)."""
    pix = normalise_8bit(f)
    ny, nx = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError(f"{path} is not a binary PGM")
    nx, ny, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError("only 8-bit PGM supported")
    return np.frombuffer(parts[4][: nx * ny], dtype=np.uint8).reshape(ny, nx)


def heat_colormap() -> np.ndarray:
    """Fixed 256-entry black-red-yellow-white ramp, shape (256, 3) uint8."""
    s = np.arange(256) / 255.0
    r = np.clip(3 * s, 0, 1)
    g = np.clip(3 * s - 1, 0, 1)
    b = np.clip(3 * s - 2, 0, 1)
    return np.floor(255 * np.stack((r, g, b), axis=1) + 0.5).astype(np.uint8)


def write_ppm(path, f: np.ndarray, colormap: np.ndarray | None = None) -> None:
    cmap = heat_colormap() if colormap is None else colormap
    pix = cmap[normalise_8bit(f)]
    ny, nx = pix.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def write_meta(path, t: float, f: np.ndarray, grid) -> None:
    lines = [
        f"t = {fmt(t)}",
        f"min = {fmt(np.min(f))}",
        f"max = {fmt(np.max(f))}",
        f"nx = {grid.nx}",
        f"ny = {grid.ny}",
        f"lx = {fmt(grid.lx)}",
        f"ly = {fmt(grid.ly)}",
        "normalisation = per-snapshot min-max to 0..255 (flat field -> 0)",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
