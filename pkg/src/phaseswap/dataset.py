"""Synthetic dataset pipeline.

Ingests a directory of real grayscale images and a directory of arbitrary
binary masks, resamples everything to a target grid, deterministically
pairs each mask with a real image, runs the phase-substitution simulator,
and writes simulated images, ground-truth masks, a train/val split, and a
JSON manifest.  Every random choice flows from a single 64-bit seed, so a
rerun with identical inputs reproduces the outputs byte for byte.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import imgio, phase_sim
from .errors import DatasetGenerationError, EmptyDirectoryError, EmptyListError
from .resample import resample

TARGET_SIZE_DEFAULT = 256

# Independent deterministic sub-streams derived from the global seed.
_STREAM_PAIRING = 0
_STREAM_SPLIT = 1


@dataclass
class SplitSpec:
    """Train/validation record counts."""

    train_count: int
    val_count: int

    def validate(self, total: int) -> None:
        if self.train_count < 0 or self.val_count < 0:
            raise ValueError("split counts must be nonnegative")
        if self.train_count + self.val_count != total:
            raise ValueError(
                f"split {self.train_count}+{self.val_count} does not cover "
                f"{total} records"
            )


@dataclass
class PairRecord:
    """Provenance of one simulated image."""

    mask_path: str
    image_path: str
    alpha: float
    seed: int
    output_image_path: str = ""
    output_mask_path: str = ""
    split: str = ""


@dataclass
class DatasetManifest:
    """Everything needed to reproduce or consume a generated dataset."""

    records: list[PairRecord]
    target_width: int
    target_height: int
    global_seed: int
    created_at: str

    def to_json(self) -> str:
        payload = {
            "created_at": self.created_at,
            "global_seed": self.global_seed,
            "target_width": self.target_width,
            "target_height": self.target_height,
            "records": [asdict(r) for r in self.records],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DatasetManifest":
        payload = json.loads(text)
        return cls(
            records=[PairRecord(**r) for r in payload["records"]],
            target_width=payload["target_width"],
            target_height=payload["target_height"],
            global_seed=payload["global_seed"],
            created_at=payload["created_at"],
        )


def ingest_images(directory) -> list[tuple[Path, np.ndarray]]:
    """Load every PNG/PGM in a directory as floats in [0, 1].

    Files are sorted by name so the result never depends on directory
    iteration order.
    """
    d = Path(directory)
    if not d.is_dir():
        raise EmptyDirectoryError(f"not a directory: {d}")
    paths = sorted(
        p for p in d.iterdir()
        if p.is_file() and p.suffix.lower() in imgio.SUPPORTED_SUFFIXES
    )
    if not paths:
        raise EmptyDirectoryError(f"no readable images in {d}")
    return [(p, imgio.load_image(p)) for p in paths]


def binarize_mask(img, threshold: float = 0.5) -> np.ndarray:
    """Threshold to {0,1}: value 1 iff input is strictly above threshold."""
    arr = np.asarray(img, dtype=np.float64)
    return (arr > threshold).astype(np.float64)


def pair_random(
    mask_paths, image_paths, global_seed: int, alpha: float = phase_sim.ALPHA_DEFAULT
) -> list[PairRecord]:
    """Pair every mask with a real image drawn uniformly (with replacement).

    Identical seeds produce identical pairings.  Each record also gets its
    own 64-bit provenance seed drawn from the same stream.
    """
    masks = [str(p) for p in mask_paths]
    images = [str(p) for p in image_paths]
    if not masks or not images:
        raise EmptyListError("mask and image lists must both be nonempty")
    phase_sim.validate_alpha(alpha)
    rng = np.random.default_rng(np.random.SeedSequence([global_seed, _STREAM_PAIRING]))
    picks = rng.integers(0, len(images), size=len(masks))
    seeds = rng.integers(0, 2**64, size=len(masks), dtype=np.uint64)
    return [
        PairRecord(
            mask_path=masks[i],
            image_path=images[int(picks[i])],
            alpha=float(alpha),
            seed=int(seeds[i]),
        )
        for i in range(len(masks))
    ]


def _newest_input_timestamp(records) -> str:
    """Latest modification time among the input files, as UTC ISO-8601.

    Used as the manifest timestamp so that identical inputs always yield an
    identical manifest (a wall-clock stamp would break reproducibility).
    """
    stamps = [
        Path(p).stat().st_mtime
        for rec in records
        for p in (rec.mask_path, rec.image_path)
    ]
    dt = datetime.fromtimestamp(max(stamps), tz=timezone.utc)
    return dt.isoformat(timespec="seconds")


def generate_dataset(
    records: list[PairRecord],
    split: SplitSpec,
    out_dir,
    *,
    target_width: int = TARGET_SIZE_DEFAULT,
    target_height: int = TARGET_SIZE_DEFAULT,
    global_seed: int = 0,
    invert_mask_polarity: bool = False,
    jobs: int = 1,
    progress=None,
) -> DatasetManifest:
    """Run the simulator over all records and write the dataset to disk.

    Writes ``images/NNNN.png`` (simulated), ``masks/NNNN.png`` (ground
    truth, exactly binarize(resample(mask, nearest)), stored as {0,255}),
    ``manifest.json`` and ``split.csv`` under ``out_dir``.  Splits are
    assigned by a seeded shuffle: the first ``train_count`` shuffled
    records train, the rest validate.  By default the simulator sees the
    mask with lesion interior 0 and background 1 (anechoic convention);
    ``invert_mask_polarity`` feeds the binarized mask through unchanged.
    ``jobs`` > 1 parallelizes per-record work without changing any output.
    ``progress`` may be a callable(done, total).
    """
    if not records:
        raise EmptyListError("no records to generate")
    split.validate(len(records))

    out = Path(out_dir)
    (out / "images").mkdir(parents=True, exist_ok=True)
    (out / "masks").mkdir(parents=True, exist_ok=True)

    shuffle_rng = np.random.default_rng(
        np.random.SeedSequence([global_seed, _STREAM_SPLIT])
    )
    order = shuffle_rng.permutation(len(records))
    is_train = np.zeros(len(records), dtype=bool)
    is_train[order[: split.train_count]] = True

    digits = max(4, len(str(len(records) - 1)))
    for i, rec in enumerate(records):
        name = f"{i:0{digits}d}.png"
        rec.output_image_path = f"images/{name}"
        rec.output_mask_path = f"masks/{name}"
        rec.split = "train" if is_train[i] else "val"

    # Real images recur across records; cache them already resampled.
    resampled_cache: dict[str, np.ndarray] = {}

    def load_resampled(path: str) -> np.ndarray:
        cached = resampled_cache.get(path)
        if cached is None:
            cached = resample(
                imgio.load_image(path), target_width, target_height, "bilinear"
            )
            resampled_cache[path] = cached
        return cached

    def run_one(rec: PairRecord) -> None:
        real = load_resampled(rec.image_path)
        ground_truth = binarize_mask(
            resample(imgio.load_image(rec.mask_path), target_width, target_height,
                     "nearest")
        )
        donor = ground_truth if invert_mask_polarity else 1.0 - ground_truth
        simulated = phase_sim.simulate(real, donor, rec.alpha)
        imgio.save_image(simulated, out / rec.output_image_path)
        imgio.save_mask(ground_truth, out / rec.output_mask_path)

    total = len(records)
    done = 0
    if jobs <= 1:
        for i, rec in enumerate(records):
            try:
                run_one(rec)
            except Exception as exc:
                raise DatasetGenerationError(
                    f"record {i} ({rec.mask_path}) failed: {exc}; "
                    f"{done} of {total} outputs written",
                    completed=done,
                    total=total,
                ) from exc
            done += 1
            if progress is not None:
                progress(done, total)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_one, rec): i for i, rec in enumerate(records)}
            failure = None
            for future in futures:
                try:
                    future.result()
                    done += 1
                    if progress is not None:
                        progress(done, total)
                except Exception as exc:  # noqa: BLE001 - reported to caller
                    if failure is None:
                        failure = (futures[future], records[futures[future]], exc)
            if failure is not None:
                i, rec, exc = failure
                raise DatasetGenerationError(
                    f"record {i} ({rec.mask_path}) failed: {exc}; "
                    f"{done} of {total} outputs written",
                    completed=done,
                    total=total,
                ) from exc

    manifest = DatasetManifest(
        records=records,
        target_width=target_width,
        target_height=target_height,
        global_seed=global_seed,
        created_at=_newest_input_timestamp(records),
    )
    (out / "manifest.json").write_text(manifest.to_json())
    split_lines = ["filename,split"]
    split_lines += [
        f"{Path(rec.output_image_path).name},{rec.split}" for rec in records
    ]
    (out / "split.csv").write_text("\n".join(split_lines) + "\n")
    return manifest
