"""2D discrete Fourier analysis with a fixed DC-centered spectrum layout.

Every spectrum handled here stores the zero-frequency bin at grid position
(height/2, width/2); the shift is applied inside ``forward_transform`` and
undone inside ``inverse_transform``, so callers never juggle layouts.  The
forward transform is unnormalized and the inverse carries the 1/(W*H)
factor.  Grids must have even dimensions: on even grids the conjugate
mirror map (w, h) -> ((W-w) mod W, (H-h) mod H) has a clean fixed-point
structure, which the phase-substitution code relies on to produce exactly
real outputs.  All frequency-domain arithmetic is double precision.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import fft as _fft

from .errors import NegativeMagnitudeError, NonRealResultError, OddDimensionError

# Inverse transforms whose imaginary part exceeds this fraction of the real
# part signal a broken Hermitian symmetry rather than rounding noise.
IMAG_RESIDUAL_TOL = 1e-6


class PolarSpectrum(NamedTuple):
    """Magnitude/phase decomposition of a spectrum (both DC-centered)."""

    magnitude: np.ndarray
    phase: np.ndarray


def validate_image(img) -> np.ndarray:
    """Coerce to a float64 2D array and check it is a usable image."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D grayscale array, got ndim={arr.ndim}")
    height, width = arr.shape
    if height < 2 or width < 2:
        raise ValueError(f"image must be at least 2x2, got {width}x{height}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains NaN or Inf values")
    return arr


def validate_spectrum(spec) -> np.ndarray:
    """Coerce to a complex128 2D array and check it is a usable spectrum."""
    arr = np.asarray(spec, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D spectrum array, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("spectrum contains NaN or Inf values")
    return arr


def require_even(height: int, width: int) -> None:
    if height % 2 or width % 2:
        raise OddDimensionError(
            f"grid dimensions must be even, got {width}x{height}"
        )


def forward_transform(img) -> np.ndarray:
    """Unnormalized 2D DFT of a real image, returned DC-centered."""
    arr = validate_image(img)
    require_even(*arr.shape)
    return _fft.fftshift(_fft.fft2(arr))


def inverse_transform(spec, return_residual: bool = False):
    """Inverse 2D DFT (including the 1/(W*H) factor) of a DC-centered spectrum.

    Returns the real part of the inverse transform.  The maximum absolute
    imaginary component is checked against ``IMAG_RESIDUAL_TOL`` times the
    maximum absolute real component; a violation raises NonRealResultError
    because it means the input spectrum was not Hermitian-symmetric.  With
    ``return_residual=True`` the residual is returned alongside the image.
    """
    arr = validate_spectrum(spec)
    require_even(*arr.shape)
    out = _fft.ifft2(_fft.ifftshift(arr))
    real = np.ascontiguousarray(out.real)
    residual = float(np.abs(out.imag).max())
    if residual > IMAG_RESIDUAL_TOL * float(np.abs(real).max()):
        raise NonRealResultError(
            f"inverse transform is not real: max imaginary residual {residual:.3e} "
            f"vs max real magnitude {np.abs(real).max():.3e}"
        )
    if return_residual:
        return real, residual
    return real


def to_polar(spec) -> PolarSpectrum:
    """Per-bin modulus and principal argument of a spectrum.

    Phases lie in (-pi, pi]; zero-magnitude bins get phase 0 by convention.
    """
    arr = validate_spectrum(spec)
    magnitude = np.abs(arr)
    phase = np.angle(arr)
    # atan2 maps values like (-1 - 0j) to -pi; fold onto the (-pi, pi] branch.
    phase[phase == -np.pi] = np.pi
    phase[magnitude == 0.0] = 0.0
    return PolarSpectrum(magnitude, phase)


def from_polar(polar: PolarSpectrum) -> np.ndarray:
    """Recompose a complex spectrum as magnitude * exp(i * phase)."""
    magnitude = np.asarray(polar.magnitude, dtype=np.float64)
    phase = np.asarray(polar.phase, dtype=np.float64)
    if magnitude.shape != phase.shape:
        raise ValueError(
            f"magnitude shape {magnitude.shape} != phase shape {phase.shape}"
        )
    if np.any(magnitude < 0):
        raise NegativeMagnitudeError("magnitude grid contains negative values")
    return magnitude * np.exp(1j * phase)


def conjugate_mirror(spec) -> np.ndarray:
    """Conjugated value at each bin's negated-frequency partner.

    For the spectrum of a real image this equals the spectrum itself (up to
    rounding), which is the Hermitian-symmetry check used by the tests.
    """
    arr = np.asarray(spec)
    return np.roll(np.conj(arr[::-1, ::-1]), (1, 1), axis=(0, 1))
