"""Image simulation by low-frequency phase substitution.

A new image is synthesized from a (real image, mask image) pair by keeping
the full magnitude spectrum of the real image and replacing the phase of
its low-frequency bins, selected by a centered elliptical binary mask,
with the phase of the mask image.  The ellipse semi-axes are ``alpha``
times the half-spectrum extent per axis; ``alpha = 0.11`` is the default.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import fft as _fft

from . import fft_core
from .errors import DimensionMismatchError

ALPHA_DEFAULT = 0.11
# At alpha = sqrt(2) the ellipse reaches the corner bins of an even grid,
# so the mask is all ones and the phase swap is total.
ALPHA_MAX = math.sqrt(2.0)


def validate_alpha(alpha) -> float:
    value = float(alpha)
    if math.isnan(value) or not 0.0 <= value <= ALPHA_MAX:
        raise ValueError(f"alpha must lie in [0, sqrt(2)], got {alpha}")
    return value


def build_lowfreq_mask(width: int, height: int, alpha: float = ALPHA_DEFAULT) -> np.ndarray:
    """Binary DC-centered mask selecting the low-frequency ellipse.

    Bin (w, h) is 1 iff
    (w - W/2)^2 / (alpha*W/2)^2 + (h - H/2)^2 / (alpha*H/2)^2 <= 1.
    ``alpha = 0`` yields the all-zero mask (limit of the shrinking ellipse).
    """
    fft_core.require_even(height, width)
    a = validate_alpha(alpha)
    if a == 0.0:
        return np.zeros((height, width), dtype=np.uint8)
    cols = np.arange(width, dtype=np.float64)
    rows = np.arange(height, dtype=np.float64)
    term_x = (cols - width / 2.0) ** 2 / (a * width / 2.0) ** 2
    term_y = (rows - height / 2.0) ** 2 / (a * height / 2.0) ** 2
    inside = term_y[:, None] + term_x[None, :] <= 1.0
    return inside.astype(np.uint8)


def blend_phase(phase_real, phase_mask_img, mask) -> np.ndarray:
    """Per-bin phase selection: mask=1 takes phase_mask_img, mask=0 phase_real.

    The mask is binary, so no angle arithmetic (and no wrapping) happens.
    """
    base = np.asarray(phase_real, dtype=np.float64)
    donor = np.asarray(phase_mask_img, dtype=np.float64)
    m = np.asarray(mask)
    if not (base.shape == donor.shape == m.shape):
        raise DimensionMismatchError(
            f"phase/mask shapes differ: {base.shape}, {donor.shape}, {m.shape}"
        )
    return np.where(m != 0, donor, base)


def normalize_output(img) -> np.ndarray:
    """Affine min-max map onto [0, 1]; constant images map to all zeros."""
    arr = fft_core.validate_image(img)
    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return np.zeros_like(arr)
    return (arr - lo) / (hi - lo)


@lru_cache(maxsize=32)
def _halfspec_indices(width: int, height: int, alpha: float):
    """Row/column indices of the masked bins inside the r2c half spectrum.

    The centered mask is invariant under the conjugate mirror map, so the
    bins with nonnegative x-frequency fully determine the substitution; the
    remaining bins are implied by Hermitian symmetry of the half-spectrum
    representation.
    """
    mask = build_lowfreq_mask(width, height, alpha)
    half = np.fft.ifftshift(mask)[:, : width // 2 + 1]
    rows, cols = np.nonzero(half)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def swap_lowfreq_phase(real_img, mask_img, alpha: float = ALPHA_DEFAULT) -> np.ndarray:
    """Phase-substituted image before range normalization.

    Combines the magnitude spectrum of ``real_img`` with a phase spectrum
    that equals the phase of ``mask_img`` on the low-frequency ellipse and
    the phase of ``real_img`` elsewhere, then inverse-transforms.  Because
    the mask is binary, unselected bins keep their exact complex values, so
    only the selected bins need polar arithmetic; running on the
    real-to-complex half spectrum then makes the output exactly real.  The
    result matches the explicit recomposition through ``fft_core`` polar
    operations to floating-point precision.
    """
    real = fft_core.validate_image(real_img)
    donor = fft_core.validate_image(mask_img)
    if real.shape != donor.shape:
        raise DimensionMismatchError(
            f"image shapes differ: {real.shape} vs {donor.shape}"
        )
    height, width = real.shape
    fft_core.require_even(height, width)
    a = validate_alpha(alpha)

    spectrum = _fft.rfft2(real)
    rows, cols = _halfspec_indices(width, height, a)
    if rows.size:
        donor_spectrum = _fft.rfft2(donor)
        kept = spectrum[rows, cols]
        spectrum[rows, cols] = np.abs(kept) * np.exp(
            1j * np.angle(donor_spectrum[rows, cols])
        )
    return _fft.irfft2(spectrum, s=(height, width), overwrite_x=True)


def simulate(real_img, mask_img, alpha: float = ALPHA_DEFAULT) -> np.ndarray:
    """Simulate a new image from a (real image, mask image) pair.

    Returns the min-max normalized phase-substituted image in [0, 1].
    """
    return normalize_output(swap_lowfreq_phase(real_img, mask_img, alpha))
