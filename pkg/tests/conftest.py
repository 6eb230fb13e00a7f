import math
from collections import deque

import numpy as np
import pytest

from colormask.bank import build_bank
from colormask.noise import COLORS, ColorSpec, color_values
from colormask.spectral import mean_periodogram

MC_SEEDS = 100
MC_SIDE = 256

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# -- independent oracles -----------------------------------------------------


def reflect_index(i, n):
    """Half-sample mirror index into [0, n): ... b a | a b ... y z | z y ..."""
    while i < 0 or i >= n:
        i = -i - 1 if i < 0 else 2 * n - 1 - i
    return i


def dense_convolve(values, weights):
    """Direct 2D convolution with the outer-product kernel, reflect boundaries."""
    h, w = values.shape
    r = (len(weights) - 1) // 2
    k2 = np.outer(weights, weights)
    out = np.zeros((h, w))
    for y in range(h):
        ys = [reflect_index(y + dy, h) for dy in range(-r, r + 1)]
        for x in range(w):
            xs = [reflect_index(x + dx, w) for dx in range(-r, r + 1)]
            out[y, x] = (k2 * values[np.ix_(ys, xs)]).sum()
    return out


def flood_fill_sizes(grid):
    """4-connected component sizes of the ones in a 2D 0/1 grid, by BFS."""
    grid = np.asarray(grid)
    h, w = grid.shape
    seen = np.zeros_like(grid, dtype=bool)
    sizes = []
    for y in range(h):
        for x in range(w):
            if grid[y, x] and not seen[y, x]:
                seen[y, x] = True
                q = deque([(y, x)])
                n = 0
                while q:
                    cy, cx = q.popleft()
                    n += 1
                    for ny, nx in ((cy - 1, cx), (cy + 1, cx), (cy, cx - 1), (cy, cx + 1)):
                        if 0 <= ny < h and 0 <= nx < w and grid[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            q.append((ny, nx))
                sizes.append(n)
    return sorted(sizes)


def topk_oracle(row, len_keep):
    """Visible set by sorting (-value, index) pairs with plain Python."""
    order = sorted(range(len(row)), key=lambda i: (-float(row[i]), i))
    return order[:len_keep]


def assert_mask_contract(mb, P, ratio):
    len_keep = int(P * (1 - ratio))
    B = mb.mask.shape[0]
    assert mb.mask.shape == (B, P)
    assert mb.ids_keep.shape == (B, len_keep)
    assert np.all(mb.mask.sum(axis=1) == P - len_keep)
    ar = np.arange(P)
    for b in range(B):
        assert np.array_equal(np.sort(mb.ids_shuffle[b]), ar)
        assert np.array_equal(np.sort(mb.ids_restore[b]), ar)
        assert np.array_equal(mb.ids_shuffle[b][mb.ids_restore[b]], ar)
        assert np.array_equal(mb.ids_keep[b], mb.ids_shuffle[b][:len_keep])
        kept = np.zeros(P, dtype=bool)
        kept[mb.ids_keep[b]] = True
        assert np.array_equal(mb.mask[b] == 0, kept)


# -- shared data -------------------------------------------------------------


@pytest.fixture(scope="session")
def white_stack():
    return np.stack([np.random.default_rng(s).random((MC_SIDE, MC_SIDE)) for s in range(MC_SEEDS)])


@pytest.fixture(scope="session")
def mean_periodograms(white_stack):
    """Seed-averaged periodogram per color at default parameters."""
    return {
        kind: mean_periodogram(color_values(white_stack, ColorSpec.for_kind(kind)))
        for kind in COLORS
    }


@pytest.fixture(scope="session")
def mini_banks():
    return {kind: build_bank(ColorSpec.for_kind(kind), 64, 64, seed_base=100) for kind in COLORS}


@pytest.fixture(scope="session")
def mask_banks():
    """256x256 banks used by the cluster-structure checks."""
    return {
        kind: build_bank(ColorSpec.for_kind(kind), 256, 256, seed_base=10_000 + 1_000 * i)
        for i, kind in enumerate(("red", "green", "blue", "purple"))
    }


def binomial_halfwidth(p, n, z=4.0):
    return z * math.sqrt(p * (1 - p) / n)
