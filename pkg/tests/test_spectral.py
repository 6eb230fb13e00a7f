import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from colormask.exceptions import InvalidParameterError
from colormask.noise import ColorSpec, NoiseField, color_values
from colormask.spectral import (
    band_energy,
    cosine_similarity,
    periodogram,
    periodogram_values,
    radial_average,
    radial_frequency,
)


def test_constant_field_has_no_power():
    p = periodogram(NoiseField(np.full((16, 16), 4.2)))
    assert np.all(p.power == 0)


def test_cosine_power_concentrated():
    n, k = 64, 5
    x = np.arange(n)
    field = np.tile(np.cos(2 * np.pi * k * x / n), (n, 1))
    p = periodogram(NoiseField(field)).power
    c = n // 2
    peak = p[c, c + k] + p[c, c - k]
    assert peak / p.sum() >= 0.99
    # analytic: each conjugate bin holds (n * n / 2) ** 2
    np.testing.assert_allclose([p[c, c + k], p[c, c - k]], (n * n / 2) ** 2, rtol=1e-9)


@pytest.mark.parametrize("seed", range(3))
def test_parseval(seed):
    x = np.random.default_rng(seed).random((32, 32))
    p = periodogram(NoiseField(x)).power
    centered = x - x.mean()
    direct = 32 * 32 * np.sum(centered**2)
    assert p.min() >= 0
    assert abs(p.sum() - direct) / direct < 1e-6


def test_dc_at_center():
    r = radial_frequency(8, 6)
    assert r[4, 3] == 0
    assert np.count_nonzero(r == 0) == 1


def test_radial_bins_cover_nyquist_disc():
    p = np.ones((32, 32))
    rs = radial_average(p, 8)
    r = radial_frequency(32, 32)
    assert rs.counts.sum() == np.count_nonzero((r > 0) & (r <= 0.5))
    assert np.all(np.diff(rs.radii) > 0)
    assert rs.radii[0] > 0 and rs.radii[-1] < 0.5
    np.testing.assert_allclose(rs.mean_power, 1.0)


def test_radial_rejects_few_bins():
    with pytest.raises(InvalidParameterError):
        radial_average(np.ones((8, 8)), 1)


def test_white_flat(mean_periodograms):
    mp = radial_average(mean_periodograms["white"], 32).mean_power
    assert np.max(np.abs(mp - mp.mean())) / mp.mean() < 0.10


def test_red_monotone(mean_periodograms):
    mp = radial_average(mean_periodograms["red"], 32).mean_power
    assert np.all(np.diff(mp[1:]) <= 0)


def test_blue_rises(mean_periodograms):
    mp = radial_average(mean_periodograms["blue"], 32).mean_power
    q = len(mp) // 4
    assert mp[-q:].mean() >= 2 * mp[:q].mean()


def test_band_energy_constant_field():
    b = band_energy(np.zeros((16, 16)))
    assert b.zero_power
    assert (b.energy_low, b.energy_mid, b.energy_high) == (0.0, 0.0, 0.0)


@pytest.mark.parametrize("cuts", [(0.25, 0.125), (0.0, 0.2), (0.1, 0.8)])
def test_band_energy_bad_cuts(cuts):
    with pytest.raises(InvalidParameterError):
        band_energy(np.ones((8, 8)), *cuts)


def test_white_band_fractions_follow_area(mean_periodograms):
    b = band_energy(mean_periodograms["white"], 0.125, 0.25)
    # fraction of the unit frequency square covered by each annulus
    low = np.pi * 0.125**2
    mid = np.pi * (0.25**2 - 0.125**2)
    high = 1 - np.pi * 0.25**2
    for got, want in ((b.energy_low, low), (b.energy_mid, mid), (b.energy_high, high)):
        assert abs(got - want) / want < 0.15


def test_green_mid_dominant(mean_periodograms):
    b = band_energy(mean_periodograms["green"], 0.05, 0.25)
    assert b.energy_mid > 0.5
    assert b.energy_mid > b.energy_low and b.energy_mid > b.energy_high


@given(st.integers(0, 2**32 - 1), st.sampled_from(["white", "red", "blue", "green", "purple"]))
def test_band_partition_sums_to_one(seed, kind):
    x = color_values(np.random.default_rng(seed).random((32, 32)), ColorSpec.for_kind(kind, sigma2=3.0))
    b = band_energy(periodogram_values(x))
    assert abs(b.energy_low + b.energy_mid + b.energy_high - 1) < 1e-9


@pytest.mark.parametrize("kind", ["white", "green", "red"])
def test_flip_invariance(kind):
    x = color_values(np.random.default_rng(5).random((64, 64)), ColorSpec.for_kind(kind))
    base = radial_average(periodogram_values(x), 16).mean_power
    for flipped in (x[:, ::-1], x[::-1, :]):
        mp = radial_average(periodogram_values(flipped), 16).mean_power
        np.testing.assert_allclose(mp, base, rtol=1e-9, atol=0)


def test_crop_preserves_spectrum_shape(white_stack):
    rng = np.random.default_rng(0)
    fields = color_values(white_stack[:40], ColorSpec.for_kind("green"))
    full = periodogram_values(fields).mean(axis=0)
    crops = []
    for f in fields:
        r, c = rng.integers(0, 129, size=2)
        crops.append(f[r : r + 128, c : c + 128])
    cropped = periodogram_values(np.stack(crops)).mean(axis=0)
    a = radial_average(full, 16).mean_power
    b = radial_average(cropped, 16).mean_power
    assert cosine_similarity(a, b) > 0.9
