"""Periodograms, radial power spectra and band-energy fractions.

Conventions: the field mean is removed, the forward 2D DFT is unnormalized,
and the power array is shifted so that DC sits at index ``(h // 2, w // 2)``.
Under these conventions ``power.sum() == h * w * ((x - x.mean())**2).sum()``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError
from .noise import NoiseField

DEFAULT_CUTS = (0.05, 0.25)
NYQUIST = 0.5


@dataclass
class Periodogram:
    power: np.ndarray

    @property
    def height(self) -> int:
        return self.power.shape[0]

    @property
    def width(self) -> int:
        return self.power.shape[1]


@dataclass
class RadialSpectrum:
    radii: np.ndarray
    mean_power: np.ndarray
    counts: np.ndarray

    @property
    def num_bins(self) -> int:
        return len(self.radii)


@dataclass
class BandPartition:
    """Fractions of non-DC power below, between and above two radial cuts.

    A field without any non-DC power (e.g. a constant) yields
    ``total_power == 0`` and all three fractions set to 0.0.
    """

    low_cut: float
    high_cut: float
    energy_low: float
    energy_mid: float
    energy_high: float
    total_power: float

    @property
    def zero_power(self) -> bool:
        return self.total_power == 0.0


def periodogram_values(values: np.ndarray) -> np.ndarray:
    """Centered power spectrum of each image in ``values`` (last two axes)."""
    values = np.asarray(values, dtype=np.float64)
    centered = values - values.mean(axis=(-2, -1), keepdims=True)
    # the mean of a constant image is not always exactly representable
    flat = np.ptp(values, axis=(-2, -1), keepdims=True) == 0
    centered = np.where(flat, 0.0, centered)
    spectrum = np.fft.fft2(centered)
    power = spectrum.real**2 + spectrum.imag**2
    return np.fft.fftshift(power, axes=(-2, -1))


def periodogram(field: NoiseField) -> Periodogram:
    return Periodogram(periodogram_values(field.values))


def radial_frequency(height: int, width: int) -> np.ndarray:
    """Radial frequency in cycles/pixel for each entry of a centered periodogram."""
    v = np.fft.fftshift(np.fft.fftfreq(height))
    u = np.fft.fftshift(np.fft.fftfreq(width))
    return np.sqrt(v[:, None] ** 2 + u[None, :] ** 2)


def _power_array(p):
    return p.power if isinstance(p, Periodogram) else np.asarray(p, dtype=np.float64)


def radial_average(p, num_bins: int = 32) -> RadialSpectrum:
    """Average power over ``num_bins`` equal-width annuli spanning (0, 0.5].

    DC and the corner entries beyond the Nyquist radius are excluded. Empty
    bins report zero power and zero count.
    """
    if isinstance(num_bins, bool) or int(num_bins) != num_bins or num_bins < 2:
        raise InvalidParameterError(f"num_bins must be an integer >= 2, got {num_bins!r}")
    num_bins = int(num_bins)
    power = _power_array(p)
    r = radial_frequency(*power.shape)
    use = (r > 0) & (r <= NYQUIST)
    idx = np.minimum((r[use] / NYQUIST * num_bins).astype(np.int64), num_bins - 1)
    sums = np.bincount(idx, weights=power[use], minlength=num_bins)
    counts = np.bincount(idx, minlength=num_bins)
    mean_power = np.divide(sums, counts, out=np.zeros(num_bins), where=counts > 0)
    edges = np.linspace(0.0, NYQUIST, num_bins + 1)
    radii = 0.5 * (edges[:-1] + edges[1:])
    return RadialSpectrum(radii, mean_power, counts)


def band_energy(p, low_cut: float = DEFAULT_CUTS[0], high_cut: float = DEFAULT_CUTS[1]) -> BandPartition:
    if not (0 < low_cut < high_cut < NYQUIST * np.sqrt(2)):
        raise InvalidParameterError(
            f"band cuts must satisfy 0 < low < high < {NYQUIST * np.sqrt(2):.4f}, "
            f"got ({low_cut}, {high_cut})"
        )
    power = _power_array(p)
    r = radial_frequency(*power.shape)
    nondc = r > 0
    low = power[nondc & (r < low_cut)].sum()
    mid = power[(r >= low_cut) & (r < high_cut)].sum()
    high = power[r >= high_cut].sum()
    total = low + mid + high
    if total <= 0:
        return BandPartition(low_cut, high_cut, 0.0, 0.0, 0.0, 0.0)
    return BandPartition(
        low_cut, high_cut, float(low / total), float(mid / total), float(high / total), float(total)
    )


def mean_periodogram(fields) -> np.ndarray:
    """Average periodogram over a stack ``(n, h, w)`` or an iterable of fields."""
    if isinstance(fields, np.ndarray):
        return periodogram_values(fields).mean(axis=0)
    total = None
    n = 0
    for f in fields:
        values = f.values if isinstance(f, NoiseField) else f
        power = periodogram_values(values)
        total = power if total is None else total + power
        n += 1
    if n == 0:
        raise InvalidParameterError("need at least one field")
    return total / n


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
