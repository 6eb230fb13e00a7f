"""Encoder/decoder indexing around a :class:`MaskBatch`.

``gather_visible`` is what an MAE encoder does to its patch tokens;
``scatter_restore`` is the decoder-side unshuffle that appends mask tokens
and reorders by ``ids_restore``.
"""

from __future__ import annotations

import numpy as np

from ._validation import check_tokens
from .exceptions import ContractViolationError, InvalidArgumentError
from .masking import MaskBatch


def _check_ids(ids, upper, name):
    if ids.size and (ids.min() < 0 or ids.max() >= upper):
        raise ContractViolationError(f"{name} has entries outside [0, {upper})")


def gather_visible(tokens, mb: MaskBatch) -> np.ndarray:
    """Select the visible tokens: ``out[b, j] = tokens[b, ids_keep[b, j]]``."""
    tokens = check_tokens(tokens)
    B, P, _ = tokens.shape
    if mb.ids_keep.shape[0] != B or mb.num_patches != P:
        raise InvalidArgumentError(
            f"tokens {tokens.shape[:2]} do not match mask batch ({mb.batch_size}, {mb.num_patches})"
        )
    _check_ids(mb.ids_keep, P, "ids_keep")
    return np.take_along_axis(tokens, mb.ids_keep[:, :, None], axis=1)


def scatter_restore(visible, mask_token, mb: MaskBatch) -> np.ndarray:
    """Rebuild the full ``(B, P, D)`` sequence, filling masked positions with ``mask_token``."""
    visible = check_tokens(visible, "visible")
    B, K, D = visible.shape
    mask_token = np.asarray(mask_token).reshape(-1)
    if mask_token.shape[0] != D:
        raise InvalidArgumentError(f"mask_token has length {mask_token.shape[0]}, expected D={D}")
    if B != mb.batch_size or K != mb.len_keep:
        raise InvalidArgumentError(
            f"visible has shape ({B}, {K}), mask batch expects ({mb.batch_size}, {mb.len_keep})"
        )
    P = mb.num_patches
    _check_ids(mb.ids_restore, P, "ids_restore")
    dtype = np.result_type(visible, mask_token)
    fill = np.broadcast_to(mask_token.astype(dtype), (B, P - K, D))
    seq = np.concatenate([visible.astype(dtype, copy=False), fill], axis=1)
    return np.take_along_axis(seq, mb.ids_restore[:, :, None], axis=1)
