"""Plain exports: binary PGM (P5) images and JSON-ready arrays."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .region import Mask


def _to_bytes(values: np.ndarray) -> np.ndarray:
    if values.dtype == bool:
        return np.where(values, 255, 0).astype(np.uint8)
    v = np.asarray(values, dtype=float)
    finite = np.isfinite(v)
    if not finite.any():
        return np.zeros(v.shape, np.uint8)
    lo, hi = v[finite].min(), v[finite].max()
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    out = np.where(finite, (v - lo) * scale, 255.0)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def pgm_bytes(values) -> bytes:
    """P5 image with the top row at the largest x2 (rows are flipped)."""
    if isinstance(values, Mask):
        values = values.bits
    img = _to_bytes(np.asarray(values))[::-1]
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()


def write_pgm(values, path) -> Path:
    path = Path(path)
    path.write_bytes(pgm_bytes(values))
    return path


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4][: w * h], dtype=np.uint8).reshape(h, w)[::-1]


def mask_to_json(mask: Mask) -> dict:
    return {
        "resolution": mask.grid.resolution,
        "bbox": mask.grid.bbox.to_json(),
        "rows": ["".join("1" if b else "0" for b in row) for row in mask.bits],
    }
