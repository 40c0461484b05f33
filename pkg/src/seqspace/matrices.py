"""Lower-triangular operator matrices and triangular algebra.

Every matrix here is a triangle indexed ``1 <= k <= n <= N``. Storage is a
packed, row-major array of the ``N (N + 1) / 2`` lower entries, so row ``n``
is the contiguous slice ``packed[n (n - 1) / 2 : n (n + 1) / 2]``.

The closed-form inverses are the only inversion route; numerical inversion
lives in the test suite as an oracle.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from ._threads import map_rows
from .exceptions import DimensionError, NumericError
from .kernel import DTYPE, check_order, coeff_table
from .validation import as_sequence, check_dim, check_positive


# x87 extended values occupy 10 bytes of a 12/16-byte slot; the padding is
# uninitialized and must not enter equality or hashing.
_SIGNIFICANT_BYTES = 10 if np.finfo(DTYPE).nmant == 63 else np.dtype(DTYPE).itemsize


def _value_key(arr):
    raw = np.ascontiguousarray(arr).view(np.uint8).reshape(len(arr), -1)
    return raw[:, :_SIGNIFICANT_BYTES].tobytes()


class WeightSequence:
    """Positive Riesz weights ``q_1..q_N`` with partial sums ``Q_n``.

    Instances are immutable and hashable (by value), which lets the
    transforms cache matrices per ``(tau, q, N)``.
    """

    __slots__ = ("q", "Q", "_key")

    def __init__(self, q):
        q = check_positive(q, "weights").copy()
        Q = np.cumsum(q)
        if len(Q) > 1 and np.any(np.diff(Q) <= 0):
            n = int(np.flatnonzero(np.diff(Q) <= 0)[0]) + 2
            raise ValueError(f"partial sums of weights stop increasing at n={n}")
        q.flags.writeable = False
        Q.flags.writeable = False
        self.q = q
        self.Q = Q
        self._key = _value_key(q)

    @classmethod
    def ones(cls, N):
        return cls(np.ones(check_dim(N), dtype=DTYPE))

    def __len__(self):
        return len(self.q)

    def truncate(self, N):
        N = check_dim(N)
        if N > len(self):
            raise DimensionError(f"N={N} exceeds the {len(self)} available weights")
        return self if N == len(self) else WeightSequence(self.q[:N])

    def __eq__(self, other):
        if not isinstance(other, WeightSequence):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"WeightSequence(N={len(self)}, q[:3]={[float(v) for v in self.q[:3]]})"


def as_weights(q, N=None):
    """Coerce ``q`` to a :class:`WeightSequence`, truncated to ``N`` if given."""
    w = q if isinstance(q, WeightSequence) else WeightSequence(q)
    return w if N is None else w.truncate(N)


def _row_start(n):
    return n * (n - 1) // 2


class LowerTriangularMatrix:
    """Dense lower triangle with 1-based ``(n, k)`` indexing.

    Parameters
    ----------
    dim : int
        Matrix order ``N``.
    packed : array_like
        Row-major lower entries, length ``N (N + 1) / 2``.
    """

    __slots__ = ("dim", "packed")

    def __init__(self, dim, packed):
        dim = check_dim(dim, "dim")
        packed = np.array(packed, dtype=DTYPE).ravel()
        if packed.size != dim * (dim + 1) // 2:
            raise DimensionError(
                f"packed triangle of order {dim} needs {dim * (dim + 1) // 2} entries, "
                f"got {packed.size}"
            )
        packed.flags.writeable = False
        self.dim = dim
        self.packed = packed

    @classmethod
    def from_rows(cls, rows):
        rows = list(rows)
        for n, r in enumerate(rows, start=1):
            if len(r) != n:
                raise DimensionError(f"row {n} has {len(r)} entries, expected {n}")
        packed = np.concatenate([np.asarray(r, dtype=DTYPE) for r in rows])
        return cls(len(rows), packed)

    @classmethod
    def from_dense(cls, A, strict=True):
        """Pack a square array; ``strict`` requires an exactly-zero upper part."""
        A = np.asarray(A, dtype=DTYPE)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {A.shape}")
        if strict and np.any(np.triu(A, 1) != 0):
            raise ValueError("matrix has nonzero entries above the diagonal")
        return cls(A.shape[0], A[np.tril_indices(A.shape[0])])

    @classmethod
    def identity(cls, N):
        return cls.from_dense(np.eye(check_dim(N), dtype=DTYPE))

    def row(self, n):
        """Entries ``a_{n,1..n}`` (1-based ``n``) as a read-only view."""
        if not 1 <= n <= self.dim:
            raise IndexError(f"row {n} out of range 1..{self.dim}")
        s = _row_start(n)
        return self.packed[s : s + n]

    def column(self, k):
        """Column ``k`` (1-based) as a dense array of length ``dim``."""
        if not 1 <= k <= self.dim:
            raise IndexError(f"column {k} out of range 1..{self.dim}")
        col = np.zeros(self.dim, dtype=DTYPE)
        for n in range(k, self.dim + 1):
            col[n - 1] = self.packed[_row_start(n) + k - 1]
        return col

    def __getitem__(self, index):
        n, k = index
        if not (1 <= n <= self.dim and 1 <= k <= self.dim):
            raise IndexError(f"entry ({n}, {k}) out of range for order {self.dim}")
        if k > n:
            return DTYPE(0)
        return self.packed[_row_start(n) + k - 1]

    def to_dense(self):
        A = np.zeros((self.dim, self.dim), dtype=DTYPE)
        A[np.tril_indices(self.dim)] = self.packed
        return A

    def __array__(self, dtype=None, copy=None):
        A = self.to_dense()
        return A if dtype is None else A.astype(dtype)

    def row_norms(self):
        """Row 1-norms ``sum_k |a_nk|`` for ``n = 1..N``."""
        return np.array([np.abs(self.row(n)).sum() for n in range(1, self.dim + 1)], dtype=DTYPE)

    def norm_inf(self):
        """Maximum row 1-norm."""
        return self.row_norms().max()

    def __matmul__(self, other):
        if isinstance(other, LowerTriangularMatrix):
            return mat_mul(self, other)
        return mat_apply(self, other)

    def __eq__(self, other):
        if not isinstance(other, LowerTriangularMatrix):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.packed, other.packed)

    __hash__ = None

    def __repr__(self):
        return f"LowerTriangularMatrix(dim={self.dim})"


def _finalize(rows, what, tau=None):
    for n, r in enumerate(rows, start=1):
        bad = np.flatnonzero(~np.isfinite(r))
        if bad.size:
            k = int(bad[0]) + 1
            raise NumericError(f"{what}: non-finite entry at (n={n}, k={k}, tau={tau})", n, k, tau)
    return LowerTriangularMatrix.from_rows(rows)


def _binomial_row(n):
    """``C(n, k)`` for ``k = 1..n``."""
    return np.array([comb(n, k) for k in range(1, n + 1)], dtype=DTYPE)


def _pow2(n):
    return np.ldexp(DTYPE(1), n)


def _toeplitz_rows(taps, N):
    # row n holds taps[n-1], ..., taps[0]
    return [taps[:n][::-1].copy() for n in range(1, N + 1)]


def build_delta(tau, N):
    """Fractional difference operator ``Delta^(tau)`` as an ``N x N`` triangle.

    Entry ``(n, k)`` is ``frac_coeff(tau, n - k)``.

    >>> build_delta(1, 3).to_dense().astype(float).tolist()
    [[1.0, 0.0, 0.0], [-1.0, 1.0, 0.0], [0.0, -1.0, 1.0]]
    """
    tau = check_order(tau)
    N = check_dim(N)
    taps = coeff_table(tau, 1, max(N - 1, 1)).values
    return _finalize(_toeplitz_rows(taps, N), "build_delta", tau)


def build_delta_inv(tau, N):
    """Inverse operator ``Delta^(-tau)``, entry ``(n, k) = frac_coeff(-tau, n - k)``."""
    tau = check_order(tau)
    N = check_dim(N)
    taps = coeff_table(tau, -1, max(N - 1, 1)).values
    return _finalize(_toeplitz_rows(taps, N), "build_delta_inv", tau)


def build_euler_riesz(q, N):
    """Euler-Riesz matrix, entry ``(n, k) = C(n, k) q_k / (2^n Q_n)``."""
    N = check_dim(N)
    w = as_weights(q, N)

    def row(n):
        return _binomial_row(n) * w.q[:n] / (_pow2(n) * w.Q[n - 1])

    return _finalize(map_rows(row, range(1, N + 1)), "build_euler_riesz")


def _inv_scale(w, n):
    """``(-1)^(n-k) 2^k Q_k`` for ``k = 1..n``."""
    k = np.arange(1, n + 1)
    sign = np.where((n - k) % 2, -1, 1).astype(DTYPE)
    return sign * np.ldexp(DTYPE(1), k) * w.Q[:n]


def build_euler_riesz_inv(q, N):
    """Closed-form inverse ``(-1)^(n-k) C(n, k) 2^k Q_k / q_n``."""
    N = check_dim(N)
    w = as_weights(q, N)

    def row(n):
        return _inv_scale(w, n) * (_binomial_row(n) * (DTYPE(1) / w.q[n - 1]))

    return _finalize(map_rows(row, range(1, N + 1)), "build_euler_riesz_inv")


def build_B_tau(tau, q, N):
    """Fractional Euler-Riesz matrix by its defining double sum.

    ``a_nk = sum_{i=k}^{n} (-1)^(i-k) C(n, i) C(tau, i-k) q_i / (2^n Q_n)``,
    accumulated over the lag ``d = i - k``.
    """
    tau = check_order(tau)
    N = check_dim(N)
    w = as_weights(q, N)
    taps = coeff_table(tau, 1, max(N - 1, 1)).values

    def row(n):
        euler = _binomial_row(n) * w.q[:n] / (_pow2(n) * w.Q[n - 1])
        out = np.zeros(n, dtype=DTYPE)
        for d in range(n):
            if taps[d] == 0:
                continue
            out[: n - d] += euler[d:] * taps[d]
        return out

    return _finalize(map_rows(row, range(1, N + 1)), "build_B_tau", tau)


@lru_cache(maxsize=8)
def _pascal(N):
    P = np.zeros((N, N), dtype=DTYPE)
    for j in range(1, N + 1):
        P[j - 1, :j] = _binomial_row(j)
    P.flags.writeable = False
    return P


def build_B_tau_inv(tau, q, N):
    """Closed-form inverse of :func:`build_B_tau`.

    ``b_nk = (-1)^(n-k) 2^k Q_k sum_{j=k}^{n} C(j, k) C(-tau, n-j) / q_j``.
    At ``tau = 0`` only the ``j = n`` term survives and the result equals
    :func:`build_euler_riesz_inv` bit for bit.
    """
    tau = check_order(tau)
    N = check_dim(N)
    w = as_weights(q, N)
    # C(-tau, m), without the (-1)^m tap sign
    g = coeff_table(tau, -1, max(N - 1, 1)).values.copy()
    g[1::2] = -g[1::2]
    P = _pascal(N)

    def row(n):
        j = np.arange(1, n + 1)
        lead = g[n - j] * (DTYPE(1) / w.q[:n])
        return _inv_scale(w, n) * (lead @ P[:n, :n])

    return _finalize(map_rows(row, range(1, N + 1)), "build_B_tau_inv", tau)


def _neumaier_matvec(A, x):
    s = np.zeros(A.shape[0], dtype=DTYPE)
    c = np.zeros_like(s)
    for k in range(A.shape[1]):
        term = A[:, k] * x[k]
        t = s + term
        big = np.abs(s) >= np.abs(term)
        c += np.where(big, (s - t) + term, (term - t) + s)
        s = t
    return s + c


def mat_apply(A, x, compensated=False):
    """``y_n = sum_{k<=n} a_nk x_k``; Neumaier-compensated when requested."""
    x = as_sequence(x)
    if len(x) != A.dim:
        raise DimensionError(f"mat_apply: matrix order {A.dim} != sequence length {len(x)}")
    D = A.to_dense()
    return _neumaier_matvec(D, x) if compensated else D @ x


def mat_mul(A, B):
    """Triangular product ``c_nk = sum_{j=k}^{n} a_nj b_jk``."""
    if A.dim != B.dim:
        raise DimensionError(f"mat_mul: orders differ ({A.dim} != {B.dim})")
    C = A.to_dense() @ B.to_dense()
    return LowerTriangularMatrix(A.dim, C[np.tril_indices(A.dim)])


def max_identity_defect(A):
    """``max |a_nk - delta_nk|`` over the full square."""
    D = np.asarray(A, dtype=DTYPE)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {D.shape}")
    return np.abs(D - np.eye(D.shape[0], dtype=DTYPE)).max()


def identity_tolerance(A, B, rtol=1e-8):
    """Tolerance for ``A @ B = I``: ``rtol * (1 + max(||A||_inf, ||B||_inf))``."""
    return DTYPE(rtol) * (1 + max(A.norm_inf(), B.norm_inf()))
