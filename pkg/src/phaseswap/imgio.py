"""Grayscale image file I/O: 8-bit PNG and binary PGM (P5).

Images travel through the library as floats; quantization to 8 bits
happens only here, at the file boundary.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import UnreadableImageError

SUPPORTED_SUFFIXES = (".png", ".pgm")


def load_image(path) -> np.ndarray:
    """Load a grayscale image as a float64 array with values in [0, 1]."""
    p = Path(path)
    try:
        with Image.open(p) as im:
            arr = np.asarray(im.convert("L"), dtype=np.float64)
    except (OSError, SyntaxError, ValueError) as exc:
        raise UnreadableImageError(f"cannot read image {p}: {exc}") from exc
    return arr / 255.0


def save_image(img, path) -> None:
    """Write floats in [0, 1] as an 8-bit grayscale image (format by suffix)."""
    arr = np.asarray(img, dtype=np.float64)
    quantized = np.clip(np.rint(arr * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(quantized, mode="L").save(path)


def save_mask(mask, path) -> None:
    """Write a {0,1} mask as a {0,255} 8-bit grayscale image."""
    arr = np.asarray(mask)
    Image.fromarray(
        np.where(arr != 0, 255, 0).astype(np.uint8), mode="L"
    ).save(path)
