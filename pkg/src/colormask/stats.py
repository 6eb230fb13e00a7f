"""Spatial statistics of mask batches: coverage and 4-connected masked clusters."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .exceptions import InvalidArgumentError

# 4-connectivity inside each mask, no connection across the batch axis
_STRUCTURE = np.zeros((3, 3, 3), dtype=bool)
_STRUCTURE[1] = ndimage.generate_binary_structure(2, 1)


@dataclass
class MaskStatistics:
    """Aggregated over every row of every batch.

    ``cluster_sizes[n]`` counts masked components of exactly ``n`` cells.
    ``mean_cluster`` is the mean component size over all components.
    """

    coverage: np.ndarray
    cluster_sizes: np.ndarray
    mean_cluster: float
    max_cluster: int
    coverage_chi2: float
    num_rows: int

    @property
    def num_patches(self) -> int:
        return len(self.coverage)

    def to_dict(self) -> dict:
        nz = np.nonzero(self.cluster_sizes)[0]
        return {
            "num_rows": self.num_rows,
            "num_patches": self.num_patches,
            "mean_cluster": self.mean_cluster,
            "max_cluster": self.max_cluster,
            "coverage_chi2": self.coverage_chi2,
            "coverage_min": float(self.coverage.min()),
            "coverage_max": float(self.coverage.max()),
            "cluster_sizes": {int(n): int(self.cluster_sizes[n]) for n in nz},
        }


def cluster_sizes(masks: np.ndarray) -> np.ndarray:
    """Sizes of all 4-connected components of ones in a ``(B, s, s)`` stack."""
    labels, n = ndimage.label(masks, structure=_STRUCTURE)
    return np.bincount(labels.reshape(-1), minlength=n + 1)[1:]


def compute_stats(batches) -> MaskStatistics:
    """Coverage and cluster statistics for a sequence of mask batches.

    Accepts ``MaskBatch`` objects or raw ``(B, P)`` 0/1 arrays. All batches
    must share the patch count and masked count per row.
    """
    if hasattr(batches, "mask") or isinstance(batches, np.ndarray):
        batches = [batches]
    masks = [np.asarray(getattr(b, "mask", b)) for b in batches]
    if not masks:
        raise InvalidArgumentError("need at least one mask batch")
    P = masks[0].shape[-1]
    if any(m.ndim != 2 or m.shape[1] != P for m in masks):
        raise InvalidArgumentError("all batches must be (B, P) with a common P")
    side = math.isqrt(P)
    if side * side != P:
        raise InvalidArgumentError(f"P={P} is not a perfect square")
    stacked = np.concatenate(masks).astype(bool)
    ones = stacked.sum(axis=1)
    if np.any(ones != ones[0]):
        raise InvalidArgumentError("batches do not share a common mask ratio")
    n_rows = stacked.shape[0]

    counts = stacked.sum(axis=0).astype(np.float64)
    coverage = counts / n_rows
    expected = n_rows * ones[0] / P
    chi2 = float(((counts - expected) ** 2).sum() / expected) if expected > 0 else 0.0

    sizes = cluster_sizes(stacked.reshape(n_rows, side, side))
    hist = np.bincount(sizes, minlength=P + 1)
    return MaskStatistics(
        coverage=coverage,
        cluster_sizes=hist,
        mean_cluster=float(sizes.mean()) if len(sizes) else 0.0,
        max_cluster=int(sizes.max()) if len(sizes) else 0,
        coverage_chi2=chi2,
        num_rows=n_rows,
    )
