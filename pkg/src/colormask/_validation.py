import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InvalidArgumentError, InvalidDimensionError


def check_noise_stack(X):
    """Return ``X`` as a float64 ``(h, w)`` or ``(n, h, w)`` array of finite values."""
    try:
        X = check_array(X, dtype=np.float64, ensure_2d=False, allow_nd=True)
    except ValueError as exc:
        raise InvalidArgumentError(str(exc)) from exc
    if X.ndim not in (2, 3) or X.shape[-1] < 1 or X.shape[-2] < 1:
        raise InvalidDimensionError(f"expected (h, w) or (n, h, w) noise, got shape {X.shape}")
    return X


def check_tokens(X, name="tokens"):
    X = np.asarray(X)
    if X.ndim != 3 or X.shape[2] < 1:
        raise InvalidArgumentError(f"{name} must have shape (B, P, D) with D >= 1, got {X.shape}")
    if np.issubdtype(X.dtype, np.floating) and not np.all(np.isfinite(X)):
        raise InvalidArgumentError(f"{name} contains NaN or Inf")
    return X
