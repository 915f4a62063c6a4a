"""Segmentation overlap scoring."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError

EPSILON_DEFAULT = 1e-6


def dsc(mask_a, mask_b, epsilon: float = EPSILON_DEFAULT) -> float:
    """Dice similarity coefficient between two binary masks.

    Returns (2*|A & B| + eps) / (|A| + |B| + eps).  The smoothing term
    keeps the value defined for empty masks (two empty masks score 1) and
    bounds disjoint masks away from a 0/0.
    """
    a = np.asarray(mask_a)
    b = np.asarray(mask_b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"mask shapes differ: {a.shape} vs {b.shape}")
    for name, arr in (("first", a), ("second", b)):
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError(f"{name} mask is not binary ({{0,1}} values required)")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    a = a != 0
    b = b != 0
    intersection = int(np.count_nonzero(a & b))
    return float(
        (2.0 * intersection + epsilon)
        / (int(np.count_nonzero(a)) + int(np.count_nonzero(b)) + epsilon)
    )
