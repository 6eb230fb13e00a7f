"""scikit-learn style front ends.

``ColorNoiseFilter`` is a stateless transformer mapping white noise images to
a color. ``PatchMasker`` builds (or loads) its noise bank in ``fit`` and
then masks token sequences in ``transform``, keeping the last
:class:`MaskBatch` so ``inverse_transform`` can put mask tokens back.
"""

from __future__ import annotations

import os

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_noise_stack, check_tokens
from .bank import NoiseBank, build_bank, load_bank
from .exceptions import InvalidArgumentError
from .masking import MaskConfig, generate
from .noise import ColorSpec, color_values
from .pipeline import gather_visible, scatter_restore


class ColorNoiseFilter(TransformerMixin, BaseEstimator):
    """Filter white noise into red, blue, green or purple noise.

    Parameters
    ----------
    color : {"white", "red", "blue", "green", "purple"}
    sigma : float, optional
        Blur width for red and blue.
    sigma1, sigma2 : float, optional
        Weak and strong blur widths for green and purple (``sigma1 < sigma2``).
    red_iterations : int, optional
        Blur + normalize rounds for red.

    Unset parameters take the library defaults. ``transform`` accepts a single
    ``(h, w)`` image or a stack ``(n, h, w)`` and returns normalized fields in
    [0, 1] of the same shape.
    """

    def __init__(self, color="green", sigma=None, sigma1=None, sigma2=None, red_iterations=None):
        self.color = color
        self.sigma = sigma
        self.sigma1 = sigma1
        self.sigma2 = sigma2
        self.red_iterations = red_iterations

    def fit(self, X=None, y=None):
        self.spec_ = ColorSpec.for_kind(
            self.color, self.sigma, self.sigma1, self.sigma2, self.red_iterations
        )
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        return color_values(check_noise_stack(X), self.spec_)


class PatchMasker(TransformerMixin, BaseEstimator):
    """Mask patch-token sequences with one of the data-independent strategies.

    Parameters
    ----------
    strategy : {"color", "random", "block", "grid"}
    color : str
        Noise color for the ``"color"`` strategy.
    mask_ratio : float
    num_patches : int
        Sequence length ``P``; must be a perfect square.
    bank : NoiseBank, str or None
        Prebuilt bank or path to a ``.cnbk`` file. When None, ``fit`` builds
        a bank with ``bank_count`` patterns of ``bank_side`` pixels.
    random_state : int or None
        Seeds bank synthesis and the mask stream.
    """

    def __init__(
        self,
        strategy="color",
        color="green",
        mask_ratio=0.75,
        num_patches=196,
        bank=None,
        bank_count=3072,
        bank_side=256,
        sigma=None,
        sigma1=None,
        sigma2=None,
        red_iterations=None,
        random_state=None,
        threads=1,
    ):
        self.strategy = strategy
        self.color = color
        self.mask_ratio = mask_ratio
        self.num_patches = num_patches
        self.bank = bank
        self.bank_count = bank_count
        self.bank_side = bank_side
        self.sigma = sigma
        self.sigma1 = sigma1
        self.sigma2 = sigma2
        self.red_iterations = red_iterations
        self.random_state = random_state
        self.threads = threads

    def fit(self, X=None, y=None):
        self.config_ = MaskConfig(self.num_patches, self.mask_ratio, 1, self.strategy)
        bank_seed, mask_seed = np.random.SeedSequence(self.random_state).spawn(2)
        self.bank_ = None
        if self.strategy == "color":
            if isinstance(self.bank, NoiseBank):
                self.bank_ = self.bank
            elif isinstance(self.bank, (str, os.PathLike)):
                self.bank_ = load_bank(self.bank)
            elif self.bank is None:
                spec = ColorSpec.for_kind(
                    self.color, self.sigma, self.sigma1, self.sigma2, self.red_iterations
                )
                seed_base = int(bank_seed.generate_state(1, np.uint32)[0])
                self.bank_ = build_bank(spec, self.bank_count, self.bank_side, seed_base, self.threads)
            else:
                raise InvalidArgumentError(f"bank must be a NoiseBank, a path or None, got {type(self.bank)}")
        self._rng = np.random.default_rng(mask_seed)
        return self

    def sample(self, batch_size):
        """Draw the next :class:`MaskBatch` of ``batch_size`` rows."""
        check_is_fitted(self, "config_")
        cfg = MaskConfig(self.num_patches, self.mask_ratio, batch_size, self.strategy)
        return generate(cfg, self.bank_, self._rng, self.threads)

    def transform(self, X):
        """Return the visible tokens ``(B, len_keep, D)`` of ``X`` ``(B, P, D)``."""
        X = check_tokens(X)
        self.masks_ = self.sample(X.shape[0])
        return gather_visible(X, self.masks_)

    def inverse_transform(self, X, mask_token=0.0):
        """Scatter visible tokens back using the masks of the last ``transform``."""
        check_is_fitted(self, "masks_")
        X = check_tokens(X, "visible")
        token = np.broadcast_to(np.asarray(mask_token, dtype=np.result_type(X, mask_token)), (X.shape[2],))
        return scatter_restore(X, token, self.masks_)
