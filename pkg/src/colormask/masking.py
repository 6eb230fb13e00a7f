"""Binary patch masks from noise windows.

Every strategy reduces to a score window per image: the ``len_keep``
highest scores stay visible, everything else is masked (1 = remove,
0 = keep). Ties are broken by ascending flat index.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bank import NoiseBank
from .exceptions import InvalidConfigError, InvalidParameterError, WindowTooLargeError

STRATEGIES = ("color", "random", "block", "grid")

DEFAULT_NUM_PATCHES = 196
DEFAULT_MASK_RATIO = 0.75

BLOCK_MIN_AREA = 16
BLOCK_MIN_ASPECT = 0.3


def keep_count(num_patches: int, mask_ratio: float) -> int:
    return int(num_patches * (1 - mask_ratio))


@dataclass(frozen=True)
class MaskConfig:
    num_patches: int = DEFAULT_NUM_PATCHES
    mask_ratio: float = DEFAULT_MASK_RATIO
    batch_size: int = 1
    strategy: str = "color"

    def __post_init__(self):
        P = self.num_patches
        if isinstance(P, bool) or int(P) != P or P < 1:
            raise InvalidConfigError(f"num_patches must be a positive integer, got {P!r}")
        if math.isqrt(int(P)) ** 2 != P:
            raise InvalidConfigError(f"num_patches must be a perfect square, got {P}")
        r = self.mask_ratio
        if isinstance(r, bool) or not np.isfinite(r) or not 0 <= r <= 1:
            raise InvalidParameterError(f"mask_ratio must lie in [0, 1], got {r!r}")
        B = self.batch_size
        if isinstance(B, bool) or int(B) != B or B < 1:
            raise InvalidConfigError(f"batch_size must be a positive integer, got {B!r}")
        if self.strategy not in STRATEGIES:
            raise InvalidConfigError(
                f"unknown strategy {self.strategy!r}; expected one of {', '.join(STRATEGIES)}"
            )

    @property
    def side(self) -> int:
        return math.isqrt(int(self.num_patches))

    @property
    def len_keep(self) -> int:
        return keep_count(self.num_patches, self.mask_ratio)

    @property
    def num_masked(self) -> int:
        return self.num_patches - self.len_keep


@dataclass(frozen=True)
class TransformSpec:
    """Crop offsets (row, col) into a bank pattern plus optional flips."""

    pattern_index: int
    crop_offsets: tuple
    hflip: bool = False
    vflip: bool = False


@dataclass
class MaskBatch:
    """Masks and index structures for ``B`` images of ``P`` patches.

    ``mask`` is 1 for removed patches. ``ids_shuffle`` ranks patches by
    score (visible first), ``ids_restore`` is its inverse permutation and
    ``ids_keep`` the first ``len_keep`` entries of ``ids_shuffle``.
    ``scores`` holds the flattened windows the ranking came from.
    """

    mask: np.ndarray
    ids_restore: np.ndarray
    ids_keep: np.ndarray
    ids_shuffle: np.ndarray
    scores: Optional[np.ndarray] = None

    @property
    def batch_size(self) -> int:
        return self.mask.shape[0]

    @property
    def num_patches(self) -> int:
        return self.mask.shape[1]

    @property
    def len_keep(self) -> int:
        return self.ids_keep.shape[1]


def masks_from_windows(windows: np.ndarray, len_keep: int) -> MaskBatch:
    """Keep the ``len_keep`` strongest entries of each row of ``windows``.

    ``windows`` is ``(B, P)`` or ``(B, s, s)`` (flattened row-major).
    """
    windows = np.asarray(windows)
    B = windows.shape[0]
    windows = windows.reshape(B, -1)
    P = windows.shape[1]
    if not 0 <= len_keep <= P:
        raise InvalidConfigError(f"len_keep {len_keep} outside [0, {P}]")
    # descending, stable: equal scores keep ascending index order
    ids_shuffle = np.argsort(-windows, axis=1, kind="stable")
    ids_restore = np.empty_like(ids_shuffle)
    np.put_along_axis(ids_restore, ids_shuffle, np.arange(P)[None, :].repeat(B, axis=0), axis=1)
    ids_keep = ids_shuffle[:, :len_keep]
    # same as gathering [0]*len_keep + [1]*(P - len_keep) through ids_restore
    mask = (ids_restore >= len_keep).astype(np.uint8)
    return MaskBatch(mask, ids_restore, ids_keep, ids_shuffle, windows)


def _check_window(bank: NoiseBank, cfg: MaskConfig):
    if bank.side < cfg.side:
        raise WindowTooLargeError(
            f"window side {cfg.side} (P={cfg.num_patches}) exceeds bank pattern side {bank.side}"
        )


def sample_transforms(bank: NoiseBank, cfg: MaskConfig, rng) -> dict:
    """Draw one transform per image: pattern index, crop offsets and two fair coin flips."""
    rng = np.random.default_rng(rng)
    _check_window(bank, cfg)
    B = cfg.batch_size
    span = bank.side - cfg.side + 1
    return {
        "pattern_index": rng.integers(0, bank.count, size=B),
        "row": rng.integers(0, span, size=B),
        "col": rng.integers(0, span, size=B),
        "hflip": rng.random(B) < 0.5,
        "vflip": rng.random(B) < 0.5,
    }


def extract_windows(bank: NoiseBank, transforms: dict, s: int) -> np.ndarray:
    """Gather the ``(B, s, s)`` noise windows described by ``transforms``.

    Crop first, then flip within the window.
    """
    side = bank.side
    steps = np.arange(s)
    rows = np.where(transforms["vflip"][:, None], s - 1 - steps, steps) + transforms["row"][:, None]
    cols = np.where(transforms["hflip"][:, None], s - 1 - steps, steps) + transforms["col"][:, None]
    base = transforms["pattern_index"].astype(np.int64) * side * side
    flat = base[:, None, None] + rows[:, :, None] * side + cols[:, None, :]
    return np.take(bank.patterns.reshape(-1), flat)


def window_for(bank: NoiseBank, t: TransformSpec, s: int) -> np.ndarray:
    """Single-window form of :func:`extract_windows`."""
    r, c = t.crop_offsets
    if not (0 <= r <= bank.side - s and 0 <= c <= bank.side - s):
        raise WindowTooLargeError(f"crop at {t.crop_offsets} does not fit a {s}x{s} window")
    if not 0 <= t.pattern_index < bank.count:
        raise InvalidConfigError(f"pattern_index {t.pattern_index} outside bank of {bank.count}")
    w = bank.patterns[t.pattern_index, r : r + s, c : c + s]
    if t.hflip:
        w = w[:, ::-1]
    if t.vflip:
        w = w[::-1, :]
    return np.ascontiguousarray(w)


def _run_rows(fn, B, threads):
    """Apply ``fn(start, stop)`` over row chunks; results concatenate in row order."""
    if threads <= 1 or B < 2:
        return [fn(0, B)]
    bounds = np.linspace(0, B, min(threads, B) + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, bounds[:-1], bounds[1:]))


def _concat(parts):
    if len(parts) == 1:
        return parts[0]
    return MaskBatch(*(np.concatenate([getattr(p, f) for p in parts]) for f in
                       ("mask", "ids_restore", "ids_keep", "ids_shuffle", "scores")))


def generate_masks(bank: NoiseBank, cfg: MaskConfig, rng=None, threads: int = 1) -> MaskBatch:
    """Color-noise masks: crop/flip a bank pattern per image, keep the top ``len_keep``."""
    _check_window(bank, cfg)
    t = sample_transforms(bank, cfg, rng)
    s, k = cfg.side, cfg.len_keep

    def rows(a, b):
        sub = {name: v[a:b] for name, v in t.items()}
        return masks_from_windows(extract_windows(bank, sub, s), k)

    return _concat(_run_rows(rows, cfg.batch_size, threads))


def generate_random_masks(cfg: MaskConfig, rng=None, threads: int = 1) -> MaskBatch:
    """Baseline random masking: a fresh uniform window per image."""
    rng = np.random.default_rng(rng)
    noise = rng.random((cfg.batch_size, cfg.num_patches), dtype=np.float32)
    k = cfg.len_keep
    return _concat(_run_rows(lambda a, b: masks_from_windows(noise[a:b], k), cfg.batch_size, threads))


def grid_scores(side: int) -> np.ndarray:
    """Keep priority per patch: within each 2x2 cell, top-left > bottom-right > top-right > bottom-left.

    At ratio 0.75 exactly the top-left patch of every cell is visible.
    """
    if side % 2:
        raise InvalidConfigError(f"grid masking needs an even window side, got {side}")
    cell = np.array([[3, 1], [0, 2]], dtype=np.float32)
    return np.tile(cell, (side // 2, side // 2))


def generate_grid_masks(cfg: MaskConfig) -> MaskBatch:
    scores = grid_scores(cfg.side).reshape(1, -1)
    return masks_from_windows(np.repeat(scores, cfg.batch_size, axis=0), cfg.len_keep)


def block_mask(side: int, num_masked: int, rng) -> np.ndarray:
    """Union random rectangles until exactly ``num_masked`` cells are covered.

    Each block has aspect ratio uniform in [0.3, 1/0.3] and area uniform in
    ``[min(16, remaining), remaining]``. Cells of the final block that would
    overshoot are dropped highest flat index first.
    """
    P = side * side
    mask = np.zeros(P, dtype=bool)
    if num_masked >= P:
        mask[:] = True
        return mask.reshape(side, side)
    remaining = num_masked
    grid = np.arange(P).reshape(side, side)
    while remaining > 0:
        area = rng.uniform(min(BLOCK_MIN_AREA, remaining), remaining)
        aspect = rng.uniform(BLOCK_MIN_ASPECT, 1 / BLOCK_MIN_ASPECT)
        h = int(np.clip(round(math.sqrt(area * aspect)), 1, side))
        w = int(np.clip(round(math.sqrt(area / aspect)), 1, side))
        top = rng.integers(0, side - h + 1)
        left = rng.integers(0, side - w + 1)
        cells = grid[top : top + h, left : left + w].reshape(-1)
        new = cells[~mask[cells]]
        if len(new) > remaining:
            new = np.sort(new)[:remaining]
        mask[new] = True
        remaining -= len(new)
    return mask.reshape(side, side)


def generate_block_masks(cfg: MaskConfig, rng=None, threads: int = 1) -> MaskBatch:
    """Block-wise masking with one independent stream per image."""
    rng = np.random.default_rng(rng)
    row_seeds = rng.integers(0, 2**63, size=cfg.batch_size)
    s, k, m = cfg.side, cfg.len_keep, cfg.num_masked

    def rows(a, b):
        scores = np.stack([
            ~block_mask(s, m, np.random.default_rng(int(seed))) for seed in row_seeds[a:b]
        ]).astype(np.float32)
        return masks_from_windows(scores, k)

    return _concat(_run_rows(rows, cfg.batch_size, threads))


def generate(cfg: MaskConfig, bank: Optional[NoiseBank] = None, rng=None, threads: int = 1) -> MaskBatch:
    """Dispatch on ``cfg.strategy``."""
    if cfg.strategy == "color":
        if bank is None:
            raise InvalidConfigError("color strategy needs a noise bank")
        return generate_masks(bank, cfg, rng, threads)
    if cfg.strategy == "random":
        return generate_random_masks(cfg, rng, threads)
    if cfg.strategy == "block":
        return generate_block_masks(cfg, rng, threads)
    return generate_grid_masks(cfg)
