"""Color-noise patch masks for masked image modeling."""

__version__ = "0.1.0"

from .bank import NoiseBank, build_bank, load_bank, save_bank
from .estimators import ColorNoiseFilter, PatchMasker
from .masking import (
    MaskBatch,
    MaskConfig,
    TransformSpec,
    generate,
    generate_block_masks,
    generate_grid_masks,
    generate_masks,
    generate_random_masks,
    masks_from_windows,
)
from .noise import (
    ColorSpec,
    GaussianKernel,
    NoiseField,
    convolve_gaussian,
    gaussian_kernel,
    generate_white,
    make_color,
    make_color_raw,
    normalize,
)
from .pipeline import gather_visible, scatter_restore
from .spectral import BandPartition, Periodogram, RadialSpectrum, band_energy, periodogram, radial_average
from .stats import MaskStatistics, compute_stats
