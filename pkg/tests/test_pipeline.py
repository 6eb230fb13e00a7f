from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colormask.exceptions import ContractViolationError, InvalidArgumentError
from colormask.masking import MaskConfig, generate, generate_random_masks
from colormask.pipeline import gather_visible, scatter_restore


def test_ratio_zero_reorders_by_shuffle():
    tokens = np.random.default_rng(0).random((3, 16, 4))
    mb = generate_random_masks(MaskConfig(16, 0.0, 3, "random"), rng=1)
    out = gather_visible(tokens, mb)
    for b in range(3):
        assert np.array_equal(out[b], tokens[b][mb.ids_shuffle[b]])
    full = scatter_restore(out, np.zeros(4), mb)
    assert np.array_equal(full, tokens)


def test_identity_payload():
    B, P = 4, 196
    tokens = np.broadcast_to(np.arange(P)[None, :, None], (B, P, 1))
    mb = generate_random_masks(MaskConfig(P, 0.75, B, "random"), rng=2)
    assert np.array_equal(gather_visible(tokens, mb)[:, :, 0], mb.ids_keep)


def test_visible_rows_come_from_input():
    tokens = np.random.default_rng(3).normal(size=(5, 16, 3))
    mb = generate_random_masks(MaskConfig(16, 0.5, 5, "random"), rng=3)
    out = gather_visible(tokens, mb)
    for b in range(5):
        have = Counter(map(tuple, tokens[b]))
        got = Counter(map(tuple, out[b]))
        assert all(have[k] >= n for k, n in got.items())


def test_mask_token_count():
    D = 8
    tokens = np.random.default_rng(4).random((6, 196, D)) + 1.0
    mb = generate_random_masks(MaskConfig(196, 0.75, 6, "random"), rng=4)
    token = -np.arange(1, D + 1, dtype=float)
    full = scatter_restore(gather_visible(tokens, mb), token, mb)
    for b in range(6):
        is_tok = np.all(full[b] == token, axis=1)
        assert is_tok.sum() == 147 == mb.mask[b].sum()
        assert np.isin(full[b], token).sum() == 147 * D


def test_contract_errors():
    mb = generate_random_masks(MaskConfig(16, 0.5, 2, "random"), rng=0)
    with pytest.raises(InvalidArgumentError):
        gather_visible(np.zeros((2, 9, 1)), mb)
    with pytest.raises(InvalidArgumentError):
        gather_visible(np.zeros((2, 16)), mb)
    with pytest.raises(InvalidArgumentError):
        scatter_restore(np.zeros((2, 7, 1)), [0.0], mb)
    with pytest.raises(InvalidArgumentError):
        scatter_restore(np.zeros((2, 8, 2)), [0.0], mb)
    mb.ids_keep[0, 0] = 99
    with pytest.raises(ContractViolationError):
        gather_visible(np.zeros((2, 16, 1)), mb)


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(["color", "random", "block", "grid"]),
    st.sampled_from([4, 16, 196]),
    st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]),
    st.integers(1, 4),
    st.integers(1, 5),
    st.integers(0, 2**32 - 1),
)
def test_round_trip(mini_banks, strategy, P, ratio, B, D, seed):
    rng = np.random.default_rng(seed)
    tokens = rng.normal(size=(B, P, D))
    token = rng.normal(size=D)
    mb = generate(MaskConfig(P, ratio, B, strategy), mini_banks["green"], rng=seed)
    full = scatter_restore(gather_visible(tokens, mb), token, mb)
    kept = mb.mask == 0
    assert np.array_equal(full[kept], tokens[kept])
    assert np.all(full[~kept] == token)
