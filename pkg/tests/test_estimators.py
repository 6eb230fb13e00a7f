import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from colormask import ColorNoiseFilter, PatchMasker, save_bank
from colormask.exceptions import InvalidParameterError
from colormask.noise import ColorSpec, color_values


def test_filter_params_round_trip():
    f = ColorNoiseFilter(color="red", sigma=1.5, red_iterations=2)
    assert f.get_params()["sigma"] == 1.5
    g = clone(f).set_params(color="blue")
    assert g.color == "blue" and g.sigma == 1.5


def test_filter_transform_matches_function():
    X = np.random.default_rng(0).random((3, 40, 40))
    out = ColorNoiseFilter(color="green").fit_transform(X)
    assert out.shape == X.shape
    assert np.array_equal(out, color_values(X, ColorSpec.for_kind("green")))
    single = ColorNoiseFilter(color="green").fit().transform(X[1])
    assert np.array_equal(single, out[1])


def test_filter_validates():
    with pytest.raises(InvalidParameterError):
        ColorNoiseFilter(color="green", sigma1=3, sigma2=2).fit()
    with pytest.raises(NotFittedError):
        ColorNoiseFilter().transform(np.zeros((30, 30)))
    with pytest.raises(ValueError):
        ColorNoiseFilter().fit().transform(np.full((30, 30), np.nan))


def test_filter_in_pipeline():
    X = np.random.default_rng(1).random((2, 64, 64))
    pipe = make_pipeline(ColorNoiseFilter(color="red"), ColorNoiseFilter(color="white"))
    assert pipe.fit_transform(X).shape == X.shape


def test_masker_transform_inverse(mini_banks):
    m = PatchMasker(bank=mini_banks["green"], random_state=0).fit()
    X = np.random.default_rng(2).random((8, 196, 4))
    vis = m.transform(X)
    assert vis.shape == (8, 49, 4)
    full = m.inverse_transform(vis, mask_token=-1.0)
    kept = m.masks_.mask == 0
    assert np.array_equal(full[kept], X[kept])
    assert np.all(full[~kept] == -1.0)


def test_masker_reproducible(mini_banks):
    a = PatchMasker(strategy="random", random_state=5).fit().sample(10)
    b = PatchMasker(strategy="random", random_state=5).fit().sample(10)
    assert np.array_equal(a.mask, b.mask)


def test_masker_builds_and_loads_bank(tmp_path, mini_banks):
    m = PatchMasker(color="blue", bank_count=4, bank_side=32, num_patches=16, random_state=1).fit()
    assert m.bank_.count == 4 and m.bank_.spec.kind == "blue"
    path = tmp_path / "b.cnbk"
    save_bank(mini_banks["blue"], path)
    loaded = PatchMasker(bank=str(path), random_state=1).fit()
    assert np.array_equal(loaded.bank_.patterns, mini_banks["blue"].patterns)


@pytest.mark.parametrize("strategy", ["random", "block", "grid"])
def test_masker_baselines(strategy):
    mb = PatchMasker(strategy=strategy, random_state=0).fit().sample(4)
    assert np.all(mb.mask.sum(axis=1) == 147)
