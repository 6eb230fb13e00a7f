"""Random noise fields and their Gaussian-filtered "colors".

Red is a low-pass (repeated blur + normalize), blue the high-pass residual
``W - blur(W)``, green a difference of two blurs (band-pass) and purple the
band-stop complement ``W - green``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import (
    InvalidArgumentError,
    InvalidDimensionError,
    InvalidParameterError,
    KernelTooLargeError,
)

COLORS = ("white", "red", "blue", "green", "purple")

DEFAULT_SIGMA = 2.0
DEFAULT_SIGMA1 = 1.0
DEFAULT_SIGMA2 = 4.0
DEFAULT_RED_ITERATIONS = 3


@dataclass
class NoiseField:
    """A 2D real-valued noise image.

    Parameters
    ----------
    values : ndarray of shape (height, width)
        Finite float64 intensities.
    provenance : str, optional
        Which color produced the field (one of ``COLORS``).
    """

    values: np.ndarray
    provenance: Optional[str] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.size == 0:
            raise InvalidDimensionError(
                f"noise field must be a non-empty 2D array, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("noise field contains NaN or Inf")
        if self.provenance is not None and self.provenance not in COLORS:
            raise InvalidArgumentError(f"unknown provenance {self.provenance!r}")
        self.values = values

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple:
        return self.values.shape


@dataclass(frozen=True)
class GaussianKernel:
    sigma: float
    radius: int
    weights: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ColorSpec:
    """Filter recipe turning white noise into one of the colors.

    ``sigma`` is used by red and blue, ``sigma1 < sigma2`` by green and
    purple. Unused parameters stay ``None``. Use :meth:`for_kind` to get the
    library defaults filled in.
    """

    kind: str
    sigma: Optional[float] = None
    sigma1: Optional[float] = None
    sigma2: Optional[float] = None
    red_iterations: Optional[int] = None

    def __post_init__(self):
        if self.kind not in COLORS:
            raise InvalidParameterError(
                f"unknown color {self.kind!r}; expected one of {', '.join(COLORS)}"
            )
        if self.kind in ("red", "blue"):
            _check_sigma(self.sigma, "sigma")
        if self.kind == "red":
            if (
                self.red_iterations is None
                or isinstance(self.red_iterations, bool)
                or int(self.red_iterations) != self.red_iterations
                or self.red_iterations < 1
            ):
                raise InvalidParameterError(
                    f"red_iterations must be a positive integer, got {self.red_iterations!r}"
                )
        if self.kind in ("green", "purple"):
            _check_sigma(self.sigma1, "sigma1")
            _check_sigma(self.sigma2, "sigma2")
            if not self.sigma1 < self.sigma2:
                raise InvalidParameterError(
                    f"sigma1 must be smaller than sigma2, got {self.sigma1} >= {self.sigma2}"
                )

    @classmethod
    def for_kind(cls, kind, sigma=None, sigma1=None, sigma2=None, red_iterations=None):
        """Build a spec for ``kind``, filling unspecified parameters with defaults."""
        if kind in ("red", "blue"):
            sigma = DEFAULT_SIGMA if sigma is None else sigma
            sigma1 = sigma2 = None
        elif kind in ("green", "purple"):
            sigma1 = DEFAULT_SIGMA1 if sigma1 is None else sigma1
            sigma2 = DEFAULT_SIGMA2 if sigma2 is None else sigma2
            sigma = None
        else:
            sigma = sigma1 = sigma2 = None
        if kind == "red":
            red_iterations = DEFAULT_RED_ITERATIONS if red_iterations is None else red_iterations
        else:
            red_iterations = None
        return cls(kind, sigma, sigma1, sigma2, red_iterations)

    @property
    def sigmas(self) -> tuple:
        return tuple(s for s in (self.sigma, self.sigma1, self.sigma2) if s is not None)

    @property
    def max_radius(self) -> int:
        """Largest kernel radius the recipe uses (0 for white)."""
        return max((kernel_radius(s) for s in self.sigmas), default=0)


def _check_sigma(value, name):
    if value is None or not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}")


def kernel_radius(sigma: float) -> int:
    return int(math.ceil(3.0 * sigma))


def generate_white(seed: int, height: int, width: int) -> NoiseField:
    """I.i.d. uniform noise on [0, 1), deterministic in ``seed``."""
    for name, n in (("height", height), ("width", width)):
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise InvalidDimensionError(f"{name} must be a positive integer, got {n!r}")
    rng = np.random.default_rng(seed)
    return NoiseField(rng.random((int(height), int(width))), provenance="white")


def gaussian_kernel(sigma: float) -> GaussianKernel:
    """Sampled 1D Gaussian truncated at ``ceil(3 sigma)`` and normalized to unit sum."""
    _check_sigma(sigma, "sigma")
    radius = kernel_radius(sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    weights = np.exp(-(offsets**2) / (2.0 * sigma**2))
    weights /= weights.sum()
    weights.setflags(write=False)
    return GaussianKernel(float(sigma), radius, weights)


def _correlate_axis(values, weights, axis):
    radius = (len(weights) - 1) // 2
    n = values.shape[axis]
    pad = [(0, 0)] * values.ndim
    pad[axis] = (radius, radius)
    # half-sample mirror (edge sample repeated): conserves the image sum exactly
    padded = np.pad(values, pad, mode="symmetric")
    index = [slice(None)] * values.ndim
    out = None
    for k, w in enumerate(weights):
        index[axis] = slice(k, k + n)
        term = w * padded[tuple(index)]
        if out is None:
            out = term
        else:
            out += term
    return out


def blur(values: np.ndarray, kernel: GaussianKernel) -> np.ndarray:
    """Separable Gaussian blur over the last two axes, mirror boundaries.

    Works on a single ``(h, w)`` image or a stack ``(n, h, w)``; each image in
    a stack gets bit-identical results to blurring it alone.
    """
    values = np.asarray(values, dtype=np.float64)
    if kernel.radius >= min(values.shape[-2:]):
        raise KernelTooLargeError(
            f"kernel radius {kernel.radius} (sigma={kernel.sigma}) needs a field larger "
            f"than {values.shape[-2]}x{values.shape[-1]}"
        )
    out = _correlate_axis(values, kernel.weights, axis=values.ndim - 1)
    return _correlate_axis(out, kernel.weights, axis=values.ndim - 2)


def convolve_gaussian(field: NoiseField, kernel: GaussianKernel) -> NoiseField:
    return NoiseField(blur(field.values, kernel), provenance=field.provenance)


def normalize_values(values: np.ndarray) -> np.ndarray:
    """Min-max rescale each image (last two axes) to [0, 1]; constant images become 0.5."""
    values = np.asarray(values, dtype=np.float64)
    lo = values.min(axis=(-2, -1), keepdims=True)
    hi = values.max(axis=(-2, -1), keepdims=True)
    span = hi - lo
    flat = span == 0
    out = (values - lo) / np.where(flat, 1.0, span)
    return np.where(flat, 0.5, out)


def normalize(field: NoiseField) -> NoiseField:
    return NoiseField(normalize_values(field.values), provenance=field.provenance)


def color_raw_values(white: np.ndarray, spec: ColorSpec) -> np.ndarray:
    """Apply the color filter without the final normalization.

    For red the first ``red_iterations - 1`` rounds are blur + normalize and
    the returned array is the last blur before its normalization.
    """
    w = np.asarray(white, dtype=np.float64)
    if spec.kind == "white":
        return w.copy()
    if spec.kind == "red":
        kernel = gaussian_kernel(spec.sigma)
        out = blur(w, kernel)
        for _ in range(spec.red_iterations - 1):
            out = blur(normalize_values(out), kernel)
        return out
    if spec.kind == "blue":
        return w - blur(w, gaussian_kernel(spec.sigma))
    band = blur(w, gaussian_kernel(spec.sigma1)) - blur(w, gaussian_kernel(spec.sigma2))
    if spec.kind == "green":
        return band
    return w - band


def color_values(white: np.ndarray, spec: ColorSpec) -> np.ndarray:
    return normalize_values(color_raw_values(white, spec))


def _check_white(white):
    if not isinstance(white, NoiseField):
        raise InvalidArgumentError("expected a NoiseField")
    if white.provenance != "white":
        raise InvalidArgumentError(
            f"color filters apply to white noise, got provenance {white.provenance!r}"
        )


def make_color_raw(white: NoiseField, spec: ColorSpec) -> NoiseField:
    _check_white(white)
    return NoiseField(color_raw_values(white.values, spec), provenance=spec.kind)


def make_color(white: NoiseField, spec: ColorSpec) -> NoiseField:
    """Filter white noise into ``spec.kind`` and min-max normalize the result."""
    _check_white(white)
    return NoiseField(color_values(white.values, spec), provenance=spec.kind)


def total_variation(values: np.ndarray) -> float:
    """Sum of absolute horizontal and vertical neighbor differences."""
    values = np.asarray(values, dtype=np.float64)
    return float(np.abs(np.diff(values, axis=-1)).sum() + np.abs(np.diff(values, axis=-2)).sum())
