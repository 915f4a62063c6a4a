"""Command-line interface.

Subcommands: ``simulate`` (one phase-substituted image), ``dataset`` (full
generation pipeline), ``mask`` (inspect the low-frequency ellipse),
``speckle`` (convolutional baseline image), ``dsc`` (overlap metric),
``bench`` (latency comparison).  Exit codes: 0 success, 2 I/O error,
3 validation error.  All randomness flows from ``--seed`` (fallback: the
``PHASESWAP_SEED`` environment variable, then 0).  An optional config file
of ``key = value`` lines supplies defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import bench, dataset, imgio, metrics, phase_sim, speckle
from .errors import DatasetGenerationError
from .resample import resample

EXIT_OK = 0
EXIT_IO = 2
EXIT_VALIDATION = 3

SEED_ENV_VAR = "PHASESWAP_SEED"

_CONFIG_KEYS = {
    "alpha": float,
    "seed": int,
    "target_size": int,
    "invert_mask_polarity": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "output_dir": str,
    "epsilon": float,
}


def _read_config(path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _CONFIG_KEYS[key](value.strip())
    return values


class Settings:
    """Flag/config/default resolution for one invocation."""

    def __init__(self, args):
        self.args = args
        self.config = _read_config(args.config) if getattr(args, "config", None) else {}

    def get(self, name, default, config_key=None):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        key = config_key or name
        if key in self.config:
            return self.config[key]
        return default

    def alpha(self) -> float:
        return phase_sim.validate_alpha(self.get("alpha", phase_sim.ALPHA_DEFAULT))

    def seed(self) -> int:
        value = self.get("seed", None)
        if value is None:
            value = int(os.environ.get(SEED_ENV_VAR, "0"))
        if not 0 <= int(value) < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {value}")
        return int(value)

    def size(self) -> tuple[int, int]:
        value = self.get("size", None, config_key="target_size")
        if value is None:
            return dataset.TARGET_SIZE_DEFAULT, dataset.TARGET_SIZE_DEFAULT
        if isinstance(value, int):
            return value, value
        if len(value) == 1:
            return value[0], value[0]
        if len(value) == 2:
            return value[0], value[1]
        raise ValueError("--size takes one (square) or two (width height) values")

    def epsilon(self) -> float:
        value = float(self.get("epsilon", metrics.EPSILON_DEFAULT))
        if value <= 0:
            raise ValueError(f"epsilon must be positive, got {value}")
        return value

    def invert_mask_polarity(self) -> bool:
        if getattr(self.args, "invert_mask_polarity", False):
            return True
        return bool(self.config.get("invert_mask_polarity", False))


def _load_binary_mask(path, invert: bool) -> np.ndarray:
    """Load a mask file and encode it for the simulator.

    Default encoding feeds the simulator lesion interior 0 on background 1
    (lesions image dark); ``invert`` passes the binarized file through
    unchanged.
    """
    binary = dataset.binarize_mask(imgio.load_image(path))
    return binary if invert else 1.0 - binary


def cmd_simulate(args) -> int:
    settings = Settings(args)
    alpha = settings.alpha()
    width, height = settings.size()
    real = imgio.load_image(args.real)
    donor = _load_binary_mask(args.mask, settings.invert_mask_polarity())
    if args.resize:
        real = resample(real, width, height, "bilinear")
        donor = resample(donor, width, height, "nearest")
    simulated = phase_sim.simulate(real, donor, alpha)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    imgio.save_image(simulated, out)
    return EXIT_OK


def cmd_dataset(args) -> int:
    settings = Settings(args)
    alpha = settings.alpha()
    seed = settings.seed()
    width, height = settings.size()

    masks = dataset.ingest_images(args.masks_dir)
    images = dataset.ingest_images(args.images_dir)
    records = dataset.pair_random(
        [p for p, _ in masks], [p for p, _ in images], seed, alpha
    )
    if args.split is not None:
        split = dataset.SplitSpec(args.split[0], args.split[1])
    else:
        train = round(0.8 * len(records))
        split = dataset.SplitSpec(train, len(records) - train)

    total = len(records)
    step = max(1, total // 10)

    def report(done, _total):
        if done % step == 0 or done == total:
            print(f"{100 * done // total}% ({done}/{total})")

    dataset.generate_dataset(
        records,
        split,
        args.out_dir,
        target_width=width,
        target_height=height,
        global_seed=seed,
        invert_mask_polarity=settings.invert_mask_polarity(),
        jobs=args.jobs,
        progress=report,
    )
    print(f"wrote {total} images to {args.out_dir}")
    return EXIT_OK


def cmd_mask(args) -> int:
    settings = Settings(args)
    mask = phase_sim.build_lowfreq_mask(args.width, args.height, settings.alpha())
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    imgio.save_mask(mask, out)
    return EXIT_OK


def cmd_speckle(args) -> int:
    settings = Settings(args)
    seed = settings.seed()
    width, height = settings.size()
    spec = speckle.PhantomSpec(
        num_scatterers=args.scatterers, grid_width=width, grid_height=height
    )
    field = speckle.sample_scatterers(spec, seed)
    if args.mask is not None:
        anechoic = dataset.binarize_mask(
            resample(imgio.load_image(args.mask), width, height, "nearest")
        )
        if settings.invert_mask_polarity():
            anechoic = 1.0 - anechoic
        field = speckle.apply_anechoic_mask(field, anechoic, spec)
    image = speckle.render_bmode(field, spec, dynamic_range_db=args.dynamic_range)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    imgio.save_image(image, out)
    return EXIT_OK


def cmd_dsc(args) -> int:
    settings = Settings(args)
    mask_a = dataset.binarize_mask(imgio.load_image(args.a))
    mask_b = dataset.binarize_mask(imgio.load_image(args.b))
    value = metrics.dsc(mask_a, mask_b, settings.epsilon())
    print(f"{value:.6f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    settings = Settings(args)
    seed = settings.seed()
    sizes = args.size if args.size is not None else [256]
    comparisons = bench.compare(
        sizes,
        seed=seed,
        iterations=args.iters,
        warmup=args.warmup,
        scatterers=args.scatterers,
        jobs=args.jobs,
    )
    print(bench.comparison_table(comparisons))
    if args.json is not None:
        out = Path(args.json)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(bench.comparison_json(comparisons))
        print(f"report written to {out}")
    return EXIT_OK


def _add_config_flag(parser):
    parser.add_argument(
        "--config", metavar="FILE",
        help="config file of 'key = value' lines; explicit flags override it",
    )


def _add_alpha_flag(parser):
    parser.add_argument(
        "--alpha", type=float, default=None,
        help=f"low-frequency ellipse extent in [0, sqrt(2)] "
             f"(default {phase_sim.ALPHA_DEFAULT})",
    )


def _add_seed_flag(parser):
    parser.add_argument(
        "--seed", type=int, default=None,
        help=f"64-bit unsigned seed (default: ${SEED_ENV_VAR} or 0)",
    )


def _add_size_flag(parser):
    parser.add_argument(
        "--size", type=int, nargs="+", default=None, metavar="N",
        help="target size: one value (square) or width height (default 256)",
    )


def _add_polarity_flag(parser):
    parser.add_argument(
        "--invert-mask-polarity", action="store_true", default=None,
        help="treat mask foreground as bright instead of anechoic/dark",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseswap",
        description="Simulate B-mode ultrasound images by substituting the "
                    "low-frequency phase spectrum of a real image with that "
                    "of an arbitrary mask.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one image from a real/mask pair")
    p.add_argument("real", help="real grayscale image (PNG/PGM)")
    p.add_argument("mask", help="mask image, binarized at 0.5")
    p.add_argument("out", help="output PNG path")
    p.add_argument("--resize", action="store_true",
                   help="resample both inputs to --size before simulating")
    _add_alpha_flag(p)
    _add_size_flag(p)
    _add_polarity_flag(p)
    _add_config_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dataset", help="generate a full simulated dataset")
    p.add_argument("masks_dir", help="directory of mask images")
    p.add_argument("images_dir", help="directory of real images")
    p.add_argument("out_dir", help="output dataset directory")
    p.add_argument("--split", type=int, nargs=2, metavar=("TRAIN", "VAL"),
                   default=None, help="train/val counts (default: 80/20 split)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers; outputs are identical for any value")
    _add_alpha_flag(p)
    _add_seed_flag(p)
    _add_size_flag(p)
    _add_polarity_flag(p)
    _add_config_flag(p)
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("mask", help="write the low-frequency ellipse mask as PNG")
    p.add_argument("width", type=int)
    p.add_argument("height", type=int)
    p.add_argument("out", help="output PNG path")
    _add_alpha_flag(p)
    _add_config_flag(p)
    p.set_defaults(func=cmd_mask)

    p = sub.add_parser("speckle", help="render a convolutional baseline B-mode image")
    p.add_argument("out", help="output PNG path")
    p.add_argument("--mask", default=None,
                   help="optional anechoic-region mask image")
    p.add_argument("--scatterers", type=int, default=100_000,
                   help="number of phantom scatterers (default 100000)")
    p.add_argument("--dynamic-range", type=float, default=60.0,
                   help="log-compression dynamic range in dB (default 60)")
    _add_seed_flag(p)
    _add_size_flag(p)
    _add_polarity_flag(p)
    _add_config_flag(p)
    p.set_defaults(func=cmd_speckle)

    p = sub.add_parser("dsc", help="Dice similarity coefficient of two mask files")
    p.add_argument("a", help="first mask image")
    p.add_argument("b", help="second mask image")
    p.add_argument("--epsilon", type=float, default=None,
                   help=f"smoothing term (default {metrics.EPSILON_DEFAULT})")
    _add_config_flag(p)
    p.set_defaults(func=cmd_dsc)

    p = sub.add_parser("bench", help="time phase_sim vs. the speckle baseline")
    p.add_argument("--iters", type=int, default=50,
                   help="timed iterations per method (default 50)")
    p.add_argument("--warmup", type=int, default=bench.WARMUP_DEFAULT,
                   help=f"discarded warmup iterations (default {bench.WARMUP_DEFAULT})")
    p.add_argument("--scatterers", type=int, default=100_000,
                   help="baseline scatterer count (default 100000)")
    p.add_argument("--json", default=None, metavar="PATH",
                   help="also write the machine-readable report here")
    p.add_argument("--jobs", type=int, default=1,
                   help="time the thread-parallel pipeline instead (default 1)")
    _add_seed_flag(p)
    _add_size_flag(p)
    _add_config_flag(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DatasetGenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc.__cause__, OSError) else EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
