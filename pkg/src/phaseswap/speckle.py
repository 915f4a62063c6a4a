"""Convolutional B-mode speckle simulator.

A deliberately simplified stand-in for full transducer-physics packages:
point scatterers are drawn uniformly over a 2D phantom, binned to the
output grid, convolved with a Gaussian-windowed axial-cosine PSF, envelope
detected with a per-column analytic signal, and log compressed.  Anechoic
regions are produced by zeroing the amplitude of scatterers that fall
inside a binary mask.  No pressure-field solve, beamforming, element
geometry, attenuation, or nonlinearity is modeled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import DimensionMismatchError, OddDimensionError


@dataclass(frozen=True)
class PhantomSpec:
    """Physical extent, scatterer count, and output grid of a phantom."""

    width_mm: float = 50.0
    depth_mm: float = 50.0
    num_scatterers: int = 100_000
    grid_width: int = 256
    grid_height: int = 256

    def __post_init__(self):
        if self.width_mm <= 0 or self.depth_mm <= 0:
            raise ValueError(
                f"phantom extent must be positive, got "
                f"{self.width_mm}mm x {self.depth_mm}mm"
            )
        if self.num_scatterers < 0:
            raise ValueError(
                f"num_scatterers must be >= 0, got {self.num_scatterers}"
            )
        if (
            self.grid_width < 2
            or self.grid_height < 2
            or self.grid_width % 2
            or self.grid_height % 2
        ):
            raise OddDimensionError(
                f"grid dimensions must be even and >= 2, got "
                f"{self.grid_width}x{self.grid_height}"
            )


@dataclass(frozen=True)
class PSFSpec:
    """Separable point spread function: Gaussian envelope, axial cosine carrier."""

    center_freq_cyc_per_px: float = 0.25
    sigma_axial_px: float = 3.0
    sigma_lateral_px: float = 6.0
    half_extent_px: int = 24

    def __post_init__(self):
        if self.sigma_axial_px <= 0 or self.sigma_lateral_px <= 0:
            raise ValueError("PSF sigmas must be positive")
        if self.half_extent_px < 3 * max(self.sigma_axial_px, self.sigma_lateral_px):
            raise ValueError(
                f"kernel half extent {self.half_extent_px}px must cover at "
                f"least 3 sigma"
            )


@dataclass(frozen=True)
class ScattererField:
    """Point scatterers: lateral/axial positions in mm plus amplitudes."""

    x_mm: np.ndarray
    z_mm: np.ndarray
    amplitude: np.ndarray

    def __len__(self):
        return self.x_mm.shape[0]


def sample_scatterers(spec: PhantomSpec, seed: int) -> ScattererField:
    """Draw scatterers i.i.d. uniform over the phantom extent.

    Amplitudes are i.i.d. standard normal.  Identical seeds produce
    identical fields.
    """
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, spec.width_mm, spec.num_scatterers)
    z = rng.uniform(0.0, spec.depth_mm, spec.num_scatterers)
    amplitude = rng.standard_normal(spec.num_scatterers)
    return ScattererField(x_mm=x, z_mm=z, amplitude=amplitude)


def _grid_indices(field: ScattererField, spec: PhantomSpec):
    """Nearest-pixel grid position of each scatterer (linear mm -> px)."""
    cols = np.minimum(
        (field.x_mm / spec.width_mm * spec.grid_width).astype(np.intp),
        spec.grid_width - 1,
    )
    rows = np.minimum(
        (field.z_mm / spec.depth_mm * spec.grid_height).astype(np.intp),
        spec.grid_height - 1,
    )
    return rows, cols


def apply_anechoic_mask(
    field: ScattererField, mask, spec: PhantomSpec
) -> ScattererField:
    """Zero the amplitude of scatterers that fall inside mask-1 pixels.

    The mask must be binary and match the phantom's output grid; positions
    map to pixels by linear mm -> pixel scaling.  Returns a new field.
    """
    arr = np.asarray(mask)
    if arr.shape != (spec.grid_height, spec.grid_width):
        raise DimensionMismatchError(
            f"mask shape {arr.shape} does not match grid "
            f"{spec.grid_height}x{spec.grid_width}"
        )
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("anechoic mask must be binary ({0,1} values required)")
    rows, cols = _grid_indices(field, spec)
    amplitude = np.where(arr[rows, cols] != 0, 0.0, field.amplitude)
    return ScattererField(x_mm=field.x_mm, z_mm=field.z_mm, amplitude=amplitude)


def scatterer_grid(field: ScattererField, spec: PhantomSpec) -> np.ndarray:
    """Sum scatterer amplitudes into their nearest pixels."""
    grid_size = spec.grid_height * spec.grid_width
    if len(field) == 0:
        return np.zeros((spec.grid_height, spec.grid_width))
    rows, cols = _grid_indices(field, spec)
    flat = np.bincount(
        rows * spec.grid_width + cols, weights=field.amplitude, minlength=grid_size
    )
    return flat.reshape(spec.grid_height, spec.grid_width)


def psf_kernel(psf: PSFSpec) -> np.ndarray:
    """Sampled PSF kernel: Gaussian window times an axial cosine carrier."""
    offsets = np.arange(-psf.half_extent_px, psf.half_extent_px + 1, dtype=np.float64)
    axial = np.exp(-(offsets**2) / (2.0 * psf.sigma_axial_px**2)) * np.cos(
        2.0 * np.pi * psf.center_freq_cyc_per_px * offsets
    )
    lateral = np.exp(-(offsets**2) / (2.0 * psf.sigma_lateral_px**2))
    return axial[:, None] * lateral[None, :]


def render_rf(
    field: ScattererField, spec: PhantomSpec, psf: PSFSpec | None = None
) -> np.ndarray:
    """Simulated RF image: binned scatterers convolved with the PSF.

    Rendering is linear in the scatterer amplitudes.
    """
    kernel = psf_kernel(psf if psf is not None else PSFSpec())
    return signal.fftconvolve(scatterer_grid(field, spec), kernel, mode="same")


def axial_envelope(rf) -> np.ndarray:
    """Envelope of the RF image: analytic-signal magnitude per column."""
    arr = np.asarray(rf, dtype=np.float64)
    return np.abs(signal.hilbert(arr, axis=0))


def log_compress(envelope, dynamic_range_db: float = 60.0) -> np.ndarray:
    """Map an envelope to [0, 1] over the given dynamic range in dB.

    The envelope peak maps to 1; values at or below peak minus
    ``dynamic_range_db`` map to 0.  An all-zero envelope stays all zero.
    """
    if dynamic_range_db <= 0:
        raise ValueError(f"dynamic range must be positive, got {dynamic_range_db}")
    env = np.asarray(envelope, dtype=np.float64)
    peak = float(env.max())
    if peak <= 0.0:
        return np.zeros_like(env)
    floor = 10.0 ** (-dynamic_range_db / 20.0)
    db = 20.0 * np.log10(np.maximum(env / peak, floor))
    return db / dynamic_range_db + 1.0


def render_bmode(
    field: ScattererField,
    spec: PhantomSpec,
    psf: PSFSpec | None = None,
    dynamic_range_db: float = 60.0,
) -> np.ndarray:
    """Full B-mode pipeline: RF render, envelope detection, log compression."""
    return log_compress(
        axial_envelope(render_rf(field, spec, psf)), dynamic_range_db
    )
