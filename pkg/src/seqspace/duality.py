"""Finite-horizon evaluators for the alpha-, beta- and gamma-dual conditions.

A "< infinity" condition cannot be decided from a finite prefix, so every
evaluator returns the whole trace of the relevant quantity over the horizon
together with a two-sided verdict: the trace must stay below an absolute
cap, and the log-log slope of its trailing window must not exceed
``slope_tol``. Limit conditions ("-> 0", "exists lim") are judged on the
trailing window ``ceil(horizon / 4)`` against ``tol``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import comb

import numpy as np

from .exceptions import DimensionError
from .kernel import DTYPE, check_order, coeff_table
from .matrices import LowerTriangularMatrix, as_weights
from .paranorm import tail_window
from .transforms import inverse_matrix
from .validation import as_sequence, check_horizon, check_positive

DEFAULT_CAP = 1e10
DEFAULT_SLOPE_TOL = 0.05
DEFAULT_B_SAMPLES = (2.0, 4.0, 8.0)


class DualVerdict(str, Enum):
    BOUNDED = "BoundedOverHorizon"
    GROWTH = "GrowthDetected"


def sup_over_finite_subsets(row_terms):
    """``sup_K |sum_{k in K} t_k|`` over all subsets, in linear time.

    The maximizing subset is either all positive terms or all negative terms.
    Terms are accumulated sequentially in index order, so the result equals
    brute-force enumeration bit for bit.
    """
    pos = neg = 0
    for t in np.asarray(row_terms).ravel():
        if t > 0:
            pos = pos + t
        elif t < 0:
            neg = neg - t
    return max(pos, neg)


@dataclass(frozen=True)
class Condition:
    """One numbered condition evaluated along the horizon."""

    name: str
    kind: str  # "bounded" or "limit"
    trace: np.ndarray
    passed: bool
    growth_rate_estimate: float | None = None
    tau_candidates: np.ndarray | None = None

    def to_dict(self):
        out = {
            "name": self.name,
            "kind": self.kind,
            "passed": self.passed,
            "trace": self.trace,
        }
        if self.growth_rate_estimate is not None:
            out["growth_rate_estimate"] = self.growth_rate_estimate
        if self.tau_candidates is not None:
            out["tau_candidates"] = self.tau_candidates
        return out


@dataclass(frozen=True)
class ConditionReport:
    """Result of a dual-set or matrix-class evaluation at one ``B``.

    ``quantity_trace`` and ``growth_rate_estimate`` describe the leading
    condition; ``conditions`` holds every evaluated condition, and the
    verdict is ``BoundedOverHorizon`` only if all of them passed.
    """

    name: str
    quantity_trace: np.ndarray
    verdict: DualVerdict
    growth_rate_estimate: float
    params: dict
    conditions: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "growth_rate_estimate": self.growth_rate_estimate,
            "params": dict(self.params),
            "quantity_trace": self.quantity_trace,
            "conditions": [c.to_dict() for c in self.conditions],
        }


def tail_slope(trace):
    """Least-squares slope of ``log trace`` against ``log n`` on the trailing window."""
    t = np.asarray(trace, dtype=float)
    h = len(t)
    if h < 2:
        return 0.0
    w = min(h, max(2, tail_window(h)))
    n = np.arange(h - w + 1, h + 1, dtype=float)
    tail = t[-w:]
    if not np.all(np.isfinite(tail)):
        return float("inf")
    if np.all(tail <= 0) or tail.max() == tail.min():
        return 0.0
    log_t = np.log(np.maximum(tail, 1e-300))
    return float(np.polyfit(np.log(n), log_t, 1)[0]) + 0.0


def _bounded(name, trace, cap, slope_tol):
    trace = np.asarray(trace, dtype=DTYPE)
    slope = tail_slope(trace)
    finite = bool(np.all(np.isfinite(trace)))
    passed = finite and bool(trace.max() <= cap) and slope <= slope_tol
    return Condition(name, "bounded", trace, passed, growth_rate_estimate=slope)


def _vanishing(name, trace, tol, tau_candidates=None):
    trace = np.asarray(trace, dtype=DTYPE)
    w = tail_window(len(trace))
    passed = bool(np.all(np.isfinite(trace)) and trace[-w:].max() <= tol)
    return Condition(name, "limit", trace, passed, tau_candidates=tau_candidates)


def _settling(name, values, tol):
    values = np.asarray(values, dtype=DTYPE)
    w = tail_window(len(values))
    tail = values[-w:]
    passed = bool(np.all(np.isfinite(tail)) and tail.max() - tail.min() <= tol)
    return Condition(name, "limit", values, passed, tau_candidates=np.array([tail.mean()]))


def _report(name, conditions, params):
    lead = conditions[0]
    verdict = DualVerdict.BOUNDED if all(c.passed for c in conditions) else DualVerdict.GROWTH
    slope = lead.growth_rate_estimate if lead.growth_rate_estimate is not None else 0.0
    return ConditionReport(
        name=name,
        quantity_trace=lead.trace,
        verdict=verdict,
        growth_rate_estimate=slope,
        params=params,
        conditions=tuple(conditions),
    )


def _running_max(v):
    return np.maximum.accumulate(np.asarray(v, dtype=DTYPE))


def _prefix(a, q, p, horizon):
    a = as_sequence(a, "a")
    horizon = check_horizon(horizon, len(a))
    w = as_weights(q, horizon)
    if p is None:
        p = np.ones(horizon, dtype=DTYPE)
    p = check_positive(p, "exponents")
    if len(p) < horizon:
        raise DimensionError(f"{len(p)} exponents given for horizon {horizon}")
    return a[:horizon], w, p[:horizon], horizon


# -- dual matrices ---------------------------------------------------------


def build_U(a, tau, q, N=None):
    """``u_nk = a_n b_nk`` with ``b`` the inverse matrix, so ``(U y)_n = a_n x_n``."""
    a, w, _, N = _prefix(a, q, None, N)
    Binv = inverse_matrix(tau, w, N).to_dense()
    return LowerTriangularMatrix.from_dense(a[:, None] * Binv)


def build_V(a, tau, q, N=None):
    """``v_nk = sum_{i=k}^{n} a_i b_ik``, so ``(V y)_n = sum_{k<=n} a_k x_k``."""
    a, w, _, N = _prefix(a, q, None, N)
    Binv = inverse_matrix(tau, w, N).to_dense()
    return LowerTriangularMatrix.from_dense(np.cumsum(a[:, None] * Binv, axis=0))


@dataclass(frozen=True)
class DualCoeff:
    """Dual coefficients ``d_k`` at horizon ``n``; ``v_nk = d_k Q_k``."""

    values: np.ndarray
    horizon: int


def dual_coeff_table(a, tau, q, N=None):
    """Dual coefficients by direct summation.

    ``d_k = 2^k a_k / q_k
    + sum_{i=k+1}^{n} (-1)^(i-k) a_i 2^k sum_{j=k}^{i} C(j, k) C(-tau, i-j) / q_j``
    with ``n = N``. Independent of :func:`build_V`, which must satisfy
    ``v_Nk = d_k Q_k``.
    """
    tau = check_order(tau)
    a, w, _, N = _prefix(a, q, None, N)
    g = coeff_table(tau, -1, max(N - 1, 1)).values.copy()
    g[1::2] = -g[1::2]
    d = np.zeros(N, dtype=DTYPE)
    for k in range(1, N + 1):
        pk = np.ldexp(DTYPE(1), k)
        total = pk * a[k - 1] / w.q[k - 1]
        for i in range(k + 1, N + 1):
            if a[i - 1] == 0:
                continue
            inner = DTYPE(0)
            for j in range(k, i + 1):
                inner += DTYPE(comb(j, k)) * g[i - j] / w.q[j - 1]
            sign = -1 if (i - k) % 2 else 1
            total += sign * a[i - 1] * pk * inner
        d[k - 1] = total
    return DualCoeff(values=d, horizon=N)


# -- dual-set evaluators ---------------------------------------------------

DUAL_SETS = {
    ("linf", "alpha"): "D1",
    ("linf", "beta"): "D2",
    ("linf", "gamma"): "D3",
    ("c0", "alpha"): "D4",
    ("c0", "beta"): "D5",
    ("c0", "gamma"): "D6",
    ("c", "alpha"): "D4",
    ("c", "beta"): "D5",
    ("c", "gamma"): "D6",
}

# intersection over M > 1 ("all") or union ("some")
QUANTIFIERS = {"D1": "all", "D2": "all", "D3": "all", "D4": "some", "D5": "some", "D6": "all"}


def _subset_trace(U, weights):
    N = U.shape[0]
    rows = [sup_over_finite_subsets(U[n, : n + 1] * weights[: n + 1]) for n in range(N)]
    return np.cumsum(np.array(rows, dtype=DTYPE))


def eval_dual_condition(
    space,
    dual,
    a,
    tau,
    q,
    p=None,
    horizon=None,
    B=2.0,
    cap=DEFAULT_CAP,
    slope_tol=DEFAULT_SLOPE_TOL,
    tol=1e-6,
):
    """Evaluate the dual-set condition for ``(space, dual)`` at one weight ``B``.

    Parameters
    ----------
    space : {"c0", "c", "linf"}
    dual : {"alpha", "beta", "gamma"}
    a : array_like
        Candidate multiplier sequence.
    tau, q, p
        Order, Riesz weights and Maddox exponents (``p=None`` means ``e``).
    horizon : int, optional
        Number of leading terms used; defaults to ``len(a)``.
    B : float
        Sample of the quantified constant, ``B > 1``; weights are
        ``B^(1/p_k)`` for l_inf and ``B^(-1/p_k)`` for c0 and c.

    Returns
    -------
    ConditionReport
    """
    key = (space, dual)
    if key not in DUAL_SETS:
        raise ValueError(f"no dual set is defined for space={space!r}, dual={dual!r}")
    if not B > 1:
        raise ValueError(f"B must exceed 1, got {B!r}")
    a, w, p, h = _prefix(a, q, p, horizon)
    Binv = inverse_matrix(tau, w, h).to_dense()
    U = a[:, None] * Binv
    V = np.cumsum(U, axis=0)
    B_ = DTYPE(B)
    w_plus = B_ ** (1 / p)
    w_minus = B_ ** (-1 / p)
    name = DUAL_SETS[key]

    if name == "D1":
        conds = [_bounded("sup_K sum_n |sum_K u_nk B^(1/p_k)|", _subset_trace(U, w_plus), cap, slope_tol)]
    elif name == "D4":
        conds = [_bounded("sup_K sum_n |sum_K u_nk B^(-1/p_k)|", _subset_trace(U, w_minus), cap, slope_tol)]
    elif name == "D5":
        conds = [_bounded("sum_n |sum_k u_nk|", np.cumsum(np.abs(U.sum(axis=1))), cap, slope_tol)]
    elif name in ("D2", "D3"):
        conds = [_bounded("sum_k |v_nk| B^(1/p_k)", (np.abs(V) * w_plus).sum(axis=1), cap, slope_tol)]
        if name == "D2":
            s = np.abs(a * w.Q / w.q) * w_plus
            conds.append(_vanishing("(a_k Q_k / q_k B^(1/p_k)) in c0", s, tol))
        else:
            conds.append(_bounded("sup_n max_k |v_nk|", _running_max(np.abs(V).max(axis=1)), cap, slope_tol))
    else:  # D6
        conds = [_bounded("sum_k |v_nk| B^(-1/p_k)", (np.abs(V) * w_minus).sum(axis=1), cap, slope_tol)]

    if space == "c":
        if dual == "alpha":
            conds.append(_bounded("sum_n |sum_k u_nk|", np.cumsum(np.abs(U.sum(axis=1))), cap, slope_tol))
        elif dual == "beta":
            conds.append(_settling("lim_n sum_k v_nk exists", V.sum(axis=1), tol))
        else:
            conds.append(_bounded("sup_n |sum_k v_nk|", _running_max(np.abs(V.sum(axis=1))), cap, slope_tol))

    params = {"B": float(B), "M": None, "horizon": h, "space": space, "dual": dual}
    return _report(name, conds, params)


@dataclass(frozen=True)
class DualMembership:
    """Per-``B`` reports combined under the set's quantifier."""

    name: str
    quantifier: str
    reports: tuple
    verdict: DualVerdict

    def to_dict(self):
        return {
            "name": self.name,
            "quantifier": self.quantifier,
            "verdict": self.verdict.value,
            "reports": [r.to_dict() for r in self.reports],
        }


def dual_membership(space, dual, a, tau, q, p=None, horizon=None, B_samples=DEFAULT_B_SAMPLES, **kwargs):
    """Evaluate a dual set at every sampled ``B`` and apply its quantifier."""
    reports = tuple(
        eval_dual_condition(space, dual, a, tau, q, p=p, horizon=horizon, B=b, **kwargs) for b in B_samples
    )
    name = reports[0].name
    quant = QUANTIFIERS[name]
    ok = [r.verdict is DualVerdict.BOUNDED for r in reports]
    good = all(ok) if quant == "all" else any(ok)
    return DualMembership(name, quant, reports, DualVerdict.BOUNDED if good else DualVerdict.GROWTH)


# -- generic matrix classes ------------------------------------------------

MATRIX_CLASSES = {
    ("linf", "l"),
    ("linf", "linf"),
    ("linf", "c"),
    ("linf", "c0"),
    ("c0", "linf"),
    ("c0", "c"),
    ("c0", "c0"),
    ("c", "linf"),
    ("c", "c"),
    ("c", "c0"),
}


def _column_candidates(D, w):
    return D[-w:].mean(axis=0)


def _settled_column_trace(D, tau_k, qn, w):
    """``max_k |a_nk - tau_k|^q_n`` over columns whose window lies below the diagonal."""
    R, C = D.shape
    settled = min(C, R - w)
    if settled <= 0:
        return np.zeros(R, dtype=DTYPE)
    dev = np.abs(D[:, :settled] - tau_k[:settled])
    return (dev ** qn[:, None]).max(axis=1)


def matrix_class_check(
    A,
    p=None,
    q_exp=None,
    source="linf",
    target="linf",
    B=2.0,
    horizon=None,
    M=2.0,
    cap=DEFAULT_CAP,
    slope_tol=DEFAULT_SLOPE_TOL,
    tol=1e-6,
):
    """Check the characterizing conditions of ``A in (source(p), target(q))``.

    ``A`` may be a :class:`LowerTriangularMatrix` or any dense 2-D array; rows
    beyond ``horizon`` are ignored. ``p`` has one entry per column and
    ``q_exp`` one per row; both default to all ones. Candidate limits
    ``tau_k`` are the trailing-window means of each column.
    """
    if (source, target) not in MATRIX_CLASSES:
        raise ValueError(f"unsupported matrix class ({source!r} -> {target!r})")
    if not B > 1:
        raise ValueError(f"B must exceed 1, got {B!r}")
    if not M > 1:
        raise ValueError(f"M must exceed 1, got {M!r}")
    D = np.asarray(A, dtype=DTYPE)
    if D.ndim != 2:
        raise DimensionError(f"A must be 2-D, got shape {D.shape}")
    h = check_horizon(horizon, D.shape[0])
    D = D[:h]
    R, C = D.shape
    p = np.ones(C, dtype=DTYPE) if p is None else check_positive(p, "p")[:C]
    qn = np.ones(R, dtype=DTYPE) if q_exp is None else check_positive(q_exp, "q_exp")[:R]
    if len(p) < C or len(qn) < R:
        raise DimensionError("exponent sequences are shorter than the matrix")

    B_ = DTYPE(B)
    wp = B_ ** (1 / p)
    wm = B_ ** (-1 / p)
    wmm = (DTYPE(M) * B_) ** (-1 / p)
    w = tail_window(R)
    tau_k = _column_candidates(D, w)
    row_sum = D.sum(axis=1)
    conds = []

    def bounded(name, trace):
        conds.append(_bounded(name, trace, cap, slope_tol))

    if source == "linf":
        if target == "l":
            rows = np.array([sup_over_finite_subsets(D[n] * wp) for n in range(R)], dtype=DTYPE)
            bounded("sup_K sum_n |sum_K a_nk B^(1/p_k)|^q_n", np.cumsum(rows**qn))
        elif target == "linf":
            bounded("sup_n (sum_k |a_nk| B^(1/p_k))^q_n", _running_max(((np.abs(D) * wp).sum(1)) ** qn))
        elif target == "c":
            bounded("sup_n sum_k |a_nk| B^(1/p_k)", _running_max((np.abs(D) * wp).sum(1)))
            dev = ((np.abs(D - tau_k) * wp).sum(1)) ** qn
            conds.append(_vanishing("lim_n (sum_k |a_nk - tau_k| B^(1/p_k))^q_n = 0", dev, tol, tau_k))
        else:
            conds.append(_vanishing("lim_n (sum_k |a_nk| B^(1/p_k))^q_n = 0", ((np.abs(D) * wp).sum(1)) ** qn, tol))
    elif target == "linf":
        bounded("sup_n (sum_k |a_nk| B^(-1/p_k))^q_n", _running_max(((np.abs(D) * wm).sum(1)) ** qn))
        if source == "c":
            bounded("sup_n |sum_k a_nk|^q_n", _running_max(np.abs(row_sum) ** qn))
    elif target == "c":
        bounded("sup_n sum_k |a_nk| B^(-1/p_k)", _running_max((np.abs(D) * wm).sum(1)))
        bounded("sup_n sum_k |a_nk - tau_k| (M B)^(-1/p_k)", _running_max((np.abs(D - tau_k) * wmm).sum(1)))
        conds.append(
            _vanishing("lim_n |a_nk - tau_k|^q_n = 0 for each k", _settled_column_trace(D, tau_k, qn, w), tol, tau_k)
        )
        if source == "c":
            limit = row_sum[-w:].mean()
            conds.append(
                _vanishing("lim_n |sum_k a_nk - tau|^q_n = 0", np.abs(row_sum - limit) ** qn, tol, np.array([limit]))
            )
    else:  # target c0
        bounded("sup_n sum_k |a_nk| (M B)^(-1/p_k)", _running_max((np.abs(D) * wmm).sum(1)))
        zero = np.zeros(C, dtype=DTYPE)
        conds.append(_vanishing("lim_n |a_nk|^q_n = 0 for each k", _settled_column_trace(D, zero, qn, w), tol))
        if source == "c":
            conds.append(_vanishing("lim_n |sum_k a_nk|^q_n = 0", np.abs(row_sum) ** qn, tol))

    params = {"B": float(B), "M": float(M), "horizon": h, "source": source, "target": target}
    return _report(f"({source}(p) -> {target}(q))", conds, params)
