"""Latency benchmarking of the phase-substitution simulator vs. the
convolutional speckle baseline.

The timed closures take pre-built inputs; file I/O and random-generator
setup stay outside the clock.  For the baseline, drawing the per-image
scatterer phantom and zeroing the anechoic region are part of simulating
one image and are therefore timed.  Timing runs single-threaded by
default; ``jobs`` > 1 measures per-image wall time of the same work
spread over a thread pool instead.
"""

from __future__ import annotations

import json
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
import scipy

from . import phase_sim, speckle
from .errors import EmptyListError

METHODS = ("phase_sim", "speckle_baseline")

WARMUP_DEFAULT = 5


@dataclass
class TimingStats:
    min_ms: float
    median_ms: float
    mean_ms: float
    p95_ms: float

    @classmethod
    def from_samples(cls, samples_ms) -> "TimingStats":
        arr = np.asarray(samples_ms, dtype=np.float64)
        return cls(
            min_ms=float(arr.min()),
            median_ms=float(np.median(arr)),
            mean_ms=float(arr.mean()),
            p95_ms=float(np.percentile(arr, 95)),
        )


@dataclass
class BenchmarkReport:
    method: str
    image_size: int
    iterations: int
    warmup: int
    per_image_ms: TimingStats
    host: str
    jobs: int = 1
    scatterers: int | None = None
    speedup_vs_baseline: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "BenchmarkReport":
        data = dict(payload)
        data["per_image_ms"] = TimingStats(**data["per_image_ms"])
        return cls(**data)


@dataclass
class MethodComparison:
    """Reports for both methods at one size, plus the median-time ratio."""

    image_size: int
    phase_sim: BenchmarkReport
    speckle_baseline: BenchmarkReport
    speedup: float

    def to_dict(self) -> dict:
        return {
            "image_size": self.image_size,
            "phase_sim": self.phase_sim.to_dict(),
            "speckle_baseline": self.speckle_baseline.to_dict(),
            "speedup": self.speedup,
        }


def host_fingerprint() -> str:
    return (
        f"{platform.platform()} | {platform.processor() or 'unknown cpu'} | "
        f"python {platform.python_version()} | numpy {np.__version__} | "
        f"scipy {scipy.__version__}"
    )


def _phase_inputs(size: int, seed: int):
    """Deterministic (real image, mask image) pair for timing."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 100]))
    real = rng.random((size, size))
    cy, cx = rng.integers(size // 4, 3 * size // 4, size=2)
    radius = size / 5.0
    yy = np.arange(size)[:, None] - cy
    xx = np.arange(size)[None, :] - cx
    lesion = (yy * yy + xx * xx) <= radius * radius
    # Anechoic convention: lesion interior 0 on a bright background.
    mask_img = np.where(lesion, 0.0, 1.0)
    return real, mask_img


def _timed_samples(fn, iterations: int, warmup: int, jobs: int) -> list[float]:
    samples = []
    if jobs <= 1:
        for _ in range(warmup):
            fn()
        for _ in range(iterations):
            start = time.perf_counter()
            fn()
            samples.append((time.perf_counter() - start) * 1e3)
        return samples
    # Throughput mode: per-image wall time across a thread pool.
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        list(pool.map(lambda _: fn(), range(warmup)))
        start = time.perf_counter()
        list(pool.map(lambda _: fn(), range(iterations)))
        elapsed_ms = (time.perf_counter() - start) * 1e3
    return [elapsed_ms / iterations] * iterations


def time_method(
    method: str,
    size: int = 256,
    iterations: int = 100,
    warmup: int = WARMUP_DEFAULT,
    seed: int = 0,
    scatterers: int = 100_000,
    jobs: int = 1,
) -> BenchmarkReport:
    """Measure per-image wall time of one simulation method.

    Inputs are generated deterministically from ``seed`` before the clock
    starts; the same image is simulated on every iteration.  Warmup
    iterations are discarded.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if warmup < 0:
        raise ValueError(f"warmup must be >= 0, got {warmup}")

    if method == "phase_sim":
        real, mask_img = _phase_inputs(size, seed)

        def fn():
            return phase_sim.simulate(real, mask_img, phase_sim.ALPHA_DEFAULT)

    else:
        spec = speckle.PhantomSpec(
            num_scatterers=scatterers, grid_width=size, grid_height=size
        )
        _, mask_img = _phase_inputs(size, seed)
        anechoic = 1.0 - mask_img  # lesion pixels are the anechoic region

        def fn():
            field = speckle.sample_scatterers(spec, seed)
            field = speckle.apply_anechoic_mask(field, anechoic, spec)
            return speckle.render_bmode(field, spec)

    samples = _timed_samples(fn, iterations, warmup, jobs)
    return BenchmarkReport(
        method=method,
        image_size=size,
        iterations=iterations,
        warmup=warmup,
        per_image_ms=TimingStats.from_samples(samples),
        host=host_fingerprint(),
        jobs=jobs,
        scatterers=scatterers if method == "speckle_baseline" else None,
    )


def compare(
    sizes,
    seed: int = 0,
    iterations: int = 50,
    warmup: int = WARMUP_DEFAULT,
    scatterers: int = 100_000,
    jobs: int = 1,
) -> list[MethodComparison]:
    """Time both methods at each size; speedup = baseline median / phase median."""
    sizes = list(sizes)
    if not sizes:
        raise EmptyListError("sizes list must be nonempty")
    results = []
    for size in sizes:
        phase_report = time_method(
            "phase_sim", size, iterations, warmup, seed, scatterers, jobs
        )
        baseline_report = time_method(
            "speckle_baseline", size, iterations, warmup, seed, scatterers, jobs
        )
        speedup = (
            baseline_report.per_image_ms.median_ms / phase_report.per_image_ms.median_ms
        )
        phase_report.speedup_vs_baseline = speedup
        results.append(
            MethodComparison(
                image_size=size,
                phase_sim=phase_report,
                speckle_baseline=baseline_report,
                speedup=speedup,
            )
        )
    return results


def comparison_table(comparisons) -> str:
    """Plain-text summary table of a comparison run."""
    lines = [
        f"{'size':>6}  {'phase_sim ms':>14}  {'baseline ms':>14}  {'speedup':>9}",
    ]
    for comp in comparisons:
        lines.append(
            f"{comp.image_size:>6}  "
            f"{comp.phase_sim.per_image_ms.median_ms:>14.3f}  "
            f"{comp.speckle_baseline.per_image_ms.median_ms:>14.3f}  "
            f"{comp.speedup:>8.1f}x"
        )
    lines.append(
        "speedup is the vs. in-repo convolutional baseline ratio of median "
        "per-image times"
    )
    return "\n".join(lines)


def comparison_json(comparisons) -> str:
    payload = {
        "host": host_fingerprint(),
        "comparisons": [c.to_dict() for c in comparisons],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
