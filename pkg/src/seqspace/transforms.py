"""Forward and inverse fractional Euler-Riesz transforms of truncated sequences."""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import binom

from .exceptions import DimensionError
from .kernel import check_order
from .matrices import WeightSequence, as_weights, build_B_tau, build_B_tau_inv, mat_apply
from .validation import as_sequence


@lru_cache(maxsize=32)
def _forward_matrix(tau, weights, N):
    return build_B_tau(tau, weights, N)


@lru_cache(maxsize=32)
def _inverse_matrix(tau, weights, N):
    return build_B_tau_inv(tau, weights, N)


def _prepare(tau, q, x, name):
    tau = check_order(tau)
    x = as_sequence(x, name)
    w = q if isinstance(q, WeightSequence) else WeightSequence(q)
    if len(x) > len(w):
        raise DimensionError(f"{name} has length {len(x)} but only {len(w)} weights were given")
    return tau, w.truncate(len(x)), x


def forward_matrix(tau, q, N):
    """Cached ``B^(tau)`` of order ``N`` for weights ``q``."""
    return _forward_matrix(check_order(tau), as_weights(q, N), N)


def inverse_matrix(tau, q, N):
    """Cached closed-form inverse of :func:`forward_matrix`."""
    return _inverse_matrix(check_order(tau), as_weights(q, N), N)


def forward(tau, q, x, compensated=False):
    """The transform ``y = B^(tau) x``.

    Parameters
    ----------
    tau : float
        Fractional order, ``tau >= 0``.
    q : array_like or WeightSequence
        Riesz weights; at least ``len(x)`` of them.
    x : array_like
        Truncated sequence ``x_1..x_N``.
    compensated : bool
        Use Neumaier summation for each output entry.

    Returns
    -------
    numpy.ndarray
        ``y_1..y_N`` in ``longdouble``.
    """
    tau, w, x = _prepare(tau, q, x, "x")
    return mat_apply(_forward_matrix(tau, w, len(x)), x, compensated=compensated)


def backward(tau, q, y, compensated=False):
    """Inverse transform ``x = (B^(tau))^{-1} y`` via the closed-form inverse."""
    tau, w, y = _prepare(tau, q, y, "y")
    return mat_apply(_inverse_matrix(tau, w, len(y)), y, compensated=compensated)


def forward_oracle(tau, q, x):
    """Literal double sum for ``B^(tau) x``, no matrix and no shared kernel.

    Fractional binomials come from :func:`scipy.special.binom`; everything is
    float64. Used only to cross-check :func:`forward`.
    """
    tau, w, x = _prepare(tau, q, x, "x")
    qf = [float(v) for v in w.q]
    xf = [float(v) for v in x]
    N = len(xf)
    y = np.empty(N)
    Q = 0.0
    for k in range(1, N + 1):
        Q += qf[k - 1]
        total = 0.0
        for j in range(1, k + 1):
            for i in range(j, k + 1):
                total += (-1) ** (i - j) * comb(k, i) * binom(tau, i - j) * qf[i - 1] * xf[j - 1]
        y[k - 1] = total / (2.0**k * Q)
    return y
