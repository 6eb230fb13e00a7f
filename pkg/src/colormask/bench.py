"""Throughput comparison between color-noise and random masking."""

from __future__ import annotations

import platform
import time

import numpy as np

from .bank import NoiseBank
from .exceptions import InvalidParameterError
from .masking import MaskConfig, generate_masks, generate_random_masks
from .noise import ColorSpec, color_values
from .spectral import DEFAULT_CUTS, band_energy, periodogram_values


def benchmark(
    bank: NoiseBank,
    batch_size: int = 4096,
    num_patches: int = 196,
    mask_ratio: float = 0.75,
    iterations: int = 100,
    seed: int = 0,
    warmup: int = 2,
) -> dict:
    """Time ``iterations`` batches of each strategy at matched (B, P, ratio).

    Iterations are interleaved, alternating which strategy runs first, so
    slow drift in machine load hits both sides equally.
    """
    if isinstance(iterations, bool) or int(iterations) != iterations or iterations < 1:
        raise InvalidParameterError(f"iterations must be a positive integer, got {iterations!r}")
    color_cfg = MaskConfig(num_patches, mask_ratio, batch_size, "color")
    random_cfg = MaskConfig(num_patches, mask_ratio, batch_size, "random")
    color_rng, random_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))

    def run_color():
        generate_masks(bank, color_cfg, color_rng)

    def run_random():
        generate_random_masks(random_cfg, random_rng)

    for _ in range(warmup):
        run_color()
        run_random()

    elapsed = {"color": 0.0, "random": 0.0}
    for i in range(int(iterations)):
        order = (("color", run_color), ("random", run_random))
        if i % 2:
            order = order[::-1]
        for name, fn in order:
            t0 = time.perf_counter()
            fn()
            elapsed[name] += time.perf_counter() - t0

    masks = batch_size * int(iterations)
    return {
        "batch_size": batch_size,
        "num_patches": num_patches,
        "mask_ratio": mask_ratio,
        "iterations": int(iterations),
        "bank_count": bank.count,
        "bank_side": bank.side,
        "bank_color": bank.spec.kind,
        "color_seconds": elapsed["color"],
        "random_seconds": elapsed["random"],
        "color_masks_per_second": masks / elapsed["color"],
        "random_masks_per_second": masks / elapsed["random"],
        "time_ratio": elapsed["color"] / elapsed["random"],
        "machine": platform.machine(),
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def red_iteration_profile(
    max_iterations: int = 6, seeds: int = 16, side: int = 128, sigma: float = 2.0
) -> list[dict]:
    """Seed-averaged low-band energy fraction of red noise per iteration count.

    Deterministic, so it is safe to store next to the timings.
    """
    white = np.stack([np.random.default_rng(s).random((side, side)) for s in range(seeds)])
    rows = []
    for k in range(1, max_iterations + 1):
        spec = ColorSpec.for_kind("red", sigma=sigma, red_iterations=k)
        power = periodogram_values(color_values(white, spec)).mean(axis=0)
        rows.append({"red_iterations": k, "energy_low": band_energy(power, *DEFAULT_CUTS).energy_low})
    return rows
