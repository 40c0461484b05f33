"""Input validation helpers shared by the functional API and the estimators."""

import numpy as np

from .exceptions import DimensionError
from .kernel import DTYPE


def as_sequence(x, name="x"):
    """Return ``x`` as a finite 1-D ``longdouble`` array."""
    arr = np.asarray(x)
    if arr.dtype == object:
        arr = arr.astype(DTYPE)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError(f"{name} must not be empty")
    if not np.issubdtype(arr.dtype, np.number):
        raise TypeError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(DTYPE)
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0]) + 1
        raise ValueError(f"{name} has a non-finite entry at index {bad}")
    return arr


def as_sequences(X, name="X"):
    """Return a 2-D ``longdouble`` array whose rows are truncated sequences."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D (n_samples, N), got shape {arr.shape}")
    if arr.shape[1] == 0:
        raise DimensionError(f"{name} has zero-length sequences")
    arr = arr.astype(DTYPE)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_positive(x, name):
    arr = as_sequence(x, name)
    if np.any(arr <= 0):
        bad = int(np.flatnonzero(arr <= 0)[0]) + 1
        raise ValueError(f"{name} must be strictly positive; entry {bad} is {arr[bad - 1]}")
    return arr


def check_dim(N, name="N"):
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValueError(f"{name} must be a positive integer, got {N!r}")
    return int(N)


def check_same_length(n1, n2, what):
    if n1 != n2:
        raise DimensionError(f"{what}: dimension mismatch ({n1} != {n2})")


def check_horizon(horizon, N):
    if horizon is None:
        return N
    horizon = check_dim(horizon, "horizon")
    if horizon > N:
        raise DimensionError(f"horizon {horizon} exceeds available data length {N}")
    return horizon
