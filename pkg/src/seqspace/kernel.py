"""Generalized binomial coefficients for fractional difference operators.

All coefficients are accumulated in ``numpy.longdouble``. The operator taps
are ``(-1)**i * C(tau, i)`` where ``C(tau, i) = prod_{j<i} (tau - j) / (j + 1)``;
the Gamma-ratio form is never evaluated so integer orders need no pole
handling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DTYPE = np.longdouble


def check_order(tau, allow_negative=False):
    """Validate a fractional order and return it as a Python float."""
    try:
        value = float(tau)
    except (TypeError, ValueError):
        raise TypeError(f"order must be a real number, got {tau!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"order must be finite, got {tau!r}")
    if value < 0 and not allow_negative:
        raise ValueError(f"order must be >= 0, got {tau!r}")
    return value


def _check_index(i):
    if isinstance(i, bool) or int(i) != i or i < 0:
        raise ValueError(f"index must be a non-negative integer, got {i!r}")
    return int(i)


def gen_binom(tau, i):
    """Generalized binomial coefficient ``C(tau, i)`` by running product.

    The product is taken as ``value * (tau - j) / (j + 1)`` so that integer
    orders reproduce the ordinary binomial coefficients exactly. Once a
    factor ``tau - j`` vanishes the result is an exact (positive) zero.

    Examples
    --------
    >>> float(gen_binom(0.5, 2))
    -0.125
    >>> float(gen_binom(1, 2))
    0.0
    """
    t = DTYPE(check_order(tau, allow_negative=True))
    i = _check_index(i)
    value = DTYPE(1)
    for j in range(i):
        factor = t - j
        if factor == 0:
            return DTYPE(0)
        value = value * factor / (j + 1)
    return value


def frac_coeff(tau, i):
    """Tap ``i`` of the order-``tau`` difference operator, ``(-1)**i C(tau, i)``."""
    value = gen_binom(tau, i)
    return -value if i % 2 else value


@dataclass(frozen=True)
class CoeffTable:
    """Cached taps ``frac_coeff(sign * tau, i)`` for ``i = 0..N``.

    ``values`` is a read-only ``longdouble`` array of length ``N + 1``.
    """

    tau: float
    sign: int
    values: np.ndarray

    @property
    def order(self):
        return self.sign * self.tau

    def __len__(self):
        return len(self.values)


def coeff_table(tau, sign, N):
    """Build the taps of ``Delta^(sign * tau)`` up to lag ``N``.

    Uses the recurrence ``c[i] = c[i-1] * (-(t - i + 1)) / i`` with
    ``t = sign * tau``. Negation is exact, so every entry is bit-identical to
    :func:`frac_coeff` evaluated independently.
    """
    tau = check_order(tau, allow_negative=True)
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    N = _check_index(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    t = DTYPE(sign * tau)
    values = np.zeros(N + 1, dtype=DTYPE)
    values[0] = 1
    for i in range(1, N + 1):
        factor = t - (i - 1)
        if factor == 0:
            break
        values[i] = values[i - 1] * (-factor) / i
    values.flags.writeable = False
    return CoeffTable(tau=tau, sign=sign, values=values)
