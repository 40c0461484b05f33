"""Schauder basis of the fractional Euler-Riesz null and convergent spaces."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .kernel import DTYPE, check_order, gen_binom
from .matrices import as_weights
from .paranorm import paranorm_g
from .transforms import backward, forward, inverse_matrix
from .validation import as_sequence, check_dim


@dataclass(frozen=True)
class BasisElement:
    k: int
    values: np.ndarray


def basis_element(tau, q, k, N):
    """Basis sequence ``b^(k)``: column ``k`` of the inverse matrix, 1-based.

    ``forward(tau, q, b^(k).values)`` is the unit vector ``e^(k)``.
    """
    N = check_dim(N)
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= N:
        raise ValueError(f"k must be an integer in 1..{N}, got {k!r}")
    k = int(k)
    values = inverse_matrix(tau, q, N).column(k)
    values.flags.writeable = False
    return BasisElement(k=k, values=values)


def basis_element_formula(tau, q, k, N):
    """Entrywise three-case formula for ``b_n^(k)``; a cross-check only.

    Below the diagonal the sum runs ``j = k..n``; the diagonal is
    ``2^n Q_n / q_n``; entries above are zero.
    """
    tau = check_order(tau)
    w = as_weights(q, N)
    out = np.zeros(N, dtype=DTYPE)
    scale = np.ldexp(DTYPE(1), k) * w.Q[k - 1]
    for n in range(k, N + 1):
        if n == k:
            out[n - 1] = np.ldexp(DTYPE(1), n) * w.Q[n - 1] / w.q[n - 1]
            continue
        s = DTYPE(0)
        for j in range(k, n + 1):
            s += DTYPE(comb(j, k)) * gen_binom(-tau, n - j) / w.q[j - 1]
        out[n - 1] = (-1) ** (n - k) * scale * s
    return out


def coefficients(tau, q, x):
    """Expansion coefficients ``mu = B^(tau) x``."""
    return forward(tau, q, x)


def _check_s(s, N):
    if isinstance(s, bool) or int(s) != s or not 0 <= s <= N:
        raise ValueError(f"s must be an integer in 0..{N}, got {s!r}")
    return int(s)


def reconstruct(tau, q, mu, s):
    """Partial sum ``x^[s] = sum_{k<=s} mu_k b^(k)``; ``s = 0`` gives zero."""
    mu = as_sequence(mu, "mu")
    N = len(mu)
    s = _check_s(s, N)
    if s == 0:
        return np.zeros(N, dtype=DTYPE)
    Binv = inverse_matrix(tau, q, N).to_dense()
    return Binv[:, :s] @ mu[:s]


def reconstruct_c(tau, q, mu, limit_l, s):
    """Partial sum of the convergent-space expansion.

    ``x^[s] = l * backward(e) + sum_{k<=s} (mu_k - l) b^(k)``.
    """
    mu = as_sequence(mu, "mu")
    N = len(mu)
    s = _check_s(s, N)
    l = DTYPE(limit_l)
    base = l * backward(tau, q, np.ones(N, dtype=DTYPE))
    return base + reconstruct(tau, q, mu - l, s)


def residual_paranorm(tau, q, mu, s, p=None):
    """``g(x - x^[s])`` where ``x = backward(mu)``."""
    mu = as_sequence(mu, "mu")
    x = backward(tau, q, mu)
    return paranorm_g(tau, q, p, x - reconstruct(tau, q, mu, s))
