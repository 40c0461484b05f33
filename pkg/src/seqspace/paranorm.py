"""Maddox exponent data, the paranorm, and finite-horizon space membership."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import DimensionError
from .kernel import DTYPE
from .transforms import forward
from .validation import as_sequence, check_horizon, check_positive


@dataclass(frozen=True)
class ExponentSequence:
    """Bounded positive exponents with ``h = inf p``, ``H = sup p``, ``M = max(1, H)``."""

    p: np.ndarray
    h: float
    H: float
    M: float

    @classmethod
    def from_values(cls, p):
        p = check_positive(p, "exponents").copy()
        p.flags.writeable = False
        h, H, M = exponent_stats(p)
        return cls(p=p, h=h, H=H, M=M)

    def __len__(self):
        return len(self.p)


def exponent_stats(p):
    """Return ``(h, H, M)`` for the exponent sequence ``p``."""
    p = check_positive(p, "exponents")
    H = p.max()
    return p.min(), H, max(DTYPE(1), H)


def _exponents(p, N):
    if p is None:
        return ExponentSequence.from_values(np.ones(N, dtype=DTYPE))
    if not isinstance(p, ExponentSequence):
        p = ExponentSequence.from_values(p)
    if len(p) < N:
        raise DimensionError(f"{len(p)} exponents given for a sequence of length {N}")
    if len(p) > N:
        p = ExponentSequence.from_values(p.p[:N])
    return p


def image_paranorm(y, p=None):
    """``sup_k |y_k|^(p_k / M)`` evaluated directly on a transformed sequence."""
    y = as_sequence(y, "y")
    e = _exponents(p, len(y))
    return np.max(np.abs(y) ** (e.p / e.M))


def paranorm_g(tau, q, p, x):
    """Paranorm ``g(x) = sup_k |(B^(tau) x)_k|^(p_k / M)``.

    ``p=None`` means ``p = e``. Returns an exact zero for the zero sequence.
    """
    x = as_sequence(x, "x")
    return image_paranorm(forward(tau, q, x), _exponents(p, len(x)))


class Verdict(str, Enum):
    NULL = "Null"
    CONVERGENT = "Convergent"
    BOUNDED = "Bounded"
    DIVERGING = "Diverging"


_RANK = {Verdict.NULL: 3, Verdict.CONVERGENT: 2, Verdict.BOUNDED: 1, Verdict.DIVERGING: 0}


@dataclass(frozen=True)
class ClassificationReport:
    """Finite-horizon membership judgement for one sequence.

    The verdict is the strongest class that passed; weaker classes are
    implied (``Null`` implies convergent implies bounded).
    """

    verdict: Verdict
    limit_estimate: float | None
    tail_sup: float
    horizon: int
    tolerance: float
    window: int

    @property
    def is_null(self):
        return _RANK[self.verdict] >= 3

    @property
    def is_convergent(self):
        return _RANK[self.verdict] >= 2

    @property
    def is_bounded(self):
        return _RANK[self.verdict] >= 1

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "limit_estimate": self.limit_estimate,
            "tail_sup": self.tail_sup,
            "horizon": self.horizon,
            "tolerance": self.tolerance,
            "window": self.window,
        }


def tail_window(horizon):
    """Trailing-window length ``ceil(horizon / 4)``."""
    return max(1, math.ceil(horizon / 4))


def classify_image(y, p=None, horizon=None, tol=1e-6):
    """Classify an already-transformed sequence ``y`` into c0(p), c(p), l_inf(p).

    Null: trailing-window max of ``|y_k|^p_k`` is at most ``tol``.
    Convergent: trailing-window oscillation of ``y_k`` is at most ``tol``.
    Bounded: ``sup_k |y_k|^p_k <= 1 / tol``.
    """
    y = as_sequence(y, "y")
    horizon = check_horizon(horizon, len(y))
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    e = _exponents(p, len(y))
    y = y[:horizon]
    z = np.abs(y) ** e.p[:horizon]
    w = tail_window(horizon)
    tail_z, tail_y = z[-w:], y[-w:]
    tail_sup = tail_z.max()
    limit = None
    if tail_sup <= tol:
        verdict = Verdict.NULL
        limit = DTYPE(0)
    elif tail_y.max() - tail_y.min() <= tol:
        verdict = Verdict.CONVERGENT
        limit = tail_y.mean()
    elif z.max() <= 1 / tol:
        verdict = Verdict.BOUNDED
    else:
        verdict = Verdict.DIVERGING
    return ClassificationReport(
        verdict=verdict,
        limit_estimate=limit,
        tail_sup=tail_sup,
        horizon=horizon,
        tolerance=tol,
        window=w,
    )


def classify(tau, q, p, x, horizon=None, tol=1e-6):
    """Classify ``x`` into the fractional Euler-Riesz spaces via its transform."""
    return classify_image(forward(tau, q, x), p, horizon=horizon, tol=tol)
