"""Deterministic image resampling (nearest and bilinear).

Sampling uses the half-pixel-center convention: output pixel j reads the
source at (j + 0.5) * (in/out) - 0.5, with edge values replicated.  All
arithmetic is double precision, so results are bit-stable across runs.
"""

from __future__ import annotations

import numpy as np

from .errors import OddDimensionError


def _source_positions(n_out: int, n_in: int) -> np.ndarray:
    return (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5


def resample(img, width: int, height: int, mode: str = "bilinear") -> np.ndarray:
    """Resample a 2D image to width x height.

    ``bilinear`` is meant for grayscale images, ``nearest`` for binary
    masks (nearest only gathers source values, so binary stays binary).
    Target dimensions must be even and at least 2.
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D array, got ndim={arr.ndim}")
    if width < 2 or height < 2 or width % 2 or height % 2:
        raise OddDimensionError(
            f"target dimensions must be even and >= 2, got {width}x{height}"
        )
    n_rows, n_cols = arr.shape

    if mode == "nearest":
        rows = np.minimum(
            np.floor((np.arange(height) + 0.5) * (n_rows / height)).astype(np.intp),
            n_rows - 1,
        )
        cols = np.minimum(
            np.floor((np.arange(width) + 0.5) * (n_cols / width)).astype(np.intp),
            n_cols - 1,
        )
        return arr[rows[:, None], cols[None, :]]

    if mode == "bilinear":
        pos_y = _source_positions(height, n_rows)
        pos_x = _source_positions(width, n_cols)
        y0f = np.floor(pos_y)
        x0f = np.floor(pos_x)
        wy = (pos_y - y0f)[:, None]
        wx = (pos_x - x0f)[None, :]
        y0 = np.clip(y0f, 0, n_rows - 1).astype(np.intp)[:, None]
        y1 = np.clip(y0f + 1, 0, n_rows - 1).astype(np.intp)[:, None]
        x0 = np.clip(x0f, 0, n_cols - 1).astype(np.intp)[None, :]
        x1 = np.clip(x0f + 1, 0, n_cols - 1).astype(np.intp)[None, :]
        top = arr[y0, x0] * (1.0 - wx) + arr[y0, x1] * wx
        bottom = arr[y1, x0] * (1.0 - wx) + arr[y1, x1] * wx
        return top * (1.0 - wy) + bottom * wy

    raise ValueError(f"unknown resampling mode {mode!r}")
