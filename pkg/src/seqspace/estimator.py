"""scikit-learn style wrappers around the transform and the space classifier.

Each row of ``X`` is one truncated sequence ``x_1..x_N``; columns are terms.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._threads import map_rows
from .io import parse_spec
from .kernel import DTYPE, check_order
from .matrices import WeightSequence, mat_apply
from .paranorm import Verdict, classify_image, image_paranorm
from .transforms import forward_matrix, inverse_matrix
from .validation import as_sequences, check_same_length


def _resolve_weights(weights, N):
    if weights is None:
        return WeightSequence.ones(N)
    if isinstance(weights, str):
        return WeightSequence(parse_spec(weights, N=N, positive=True).generate())
    return WeightSequence(weights).truncate(N)


def _resolve_exponents(exponents, N):
    if exponents is None:
        return None
    if isinstance(exponents, str):
        return parse_spec(exponents, N=N, positive=True).generate()
    return np.asarray(exponents, dtype=DTYPE)[:N]


class _SequenceEstimator(BaseEstimator):
    def _fit_common(self, X):
        X = as_sequences(X)
        check_order(self.tau)
        self.n_features_in_ = X.shape[1]
        self.weights_ = _resolve_weights(self.weights, self.n_features_in_)
        return X

    def _check_X(self, X):
        check_is_fitted(self, "weights_")
        X = as_sequences(X)
        check_same_length(X.shape[1], self.n_features_in_, "X columns vs fitted N")
        return X


class EulerRieszTransformer(TransformerMixin, _SequenceEstimator):
    """Row-wise fractional Euler-Riesz transform ``y = B^(tau) x``.

    Parameters
    ----------
    tau : float, default=0.0
        Fractional order, ``tau >= 0``.
    weights : array-like, str or None, default=None
        Positive Riesz weights ``q``; a spec string such as ``"power:1"``,
        or ``None`` for ``q = e``.
    compensated : bool, default=False
        Use compensated summation in the matrix-vector products.

    Attributes
    ----------
    n_features_in_ : int
        Sequence length ``N`` seen during ``fit``.
    weights_ : WeightSequence
    matrix_, inverse_ : LowerTriangularMatrix
        The forward matrix and its closed-form inverse.
    """

    def __init__(self, tau=0.0, weights=None, compensated=False):
        self.tau = tau
        self.weights = weights
        self.compensated = compensated

    def fit(self, X, y=None):
        self._fit_common(X)
        N = self.n_features_in_
        self.matrix_ = forward_matrix(self.tau, self.weights_, N)
        self.inverse_ = inverse_matrix(self.tau, self.weights_, N)
        return self

    def _apply(self, A, X):
        rows = map_rows(lambda i: mat_apply(A, X[i], compensated=self.compensated), range(len(X)))
        return np.vstack(rows)

    def transform(self, X):
        X = self._check_X(X)
        return self._apply(self.matrix_, X)

    def inverse_transform(self, X):
        X = self._check_X(X)
        return self._apply(self.inverse_, X)


class SequenceSpaceClassifier(_SequenceEstimator):
    """Finite-horizon membership of each row in c0(p), c(p) or l_inf(p).

    ``predict`` returns the strongest class that passed, as one of
    ``classes_``; ``paranorm`` gives ``g(x)`` per row. ``fit`` only records
    the length and resolves the weights and exponents; nothing is learned.

    Parameters
    ----------
    tau : float, default=0.0
    weights : array-like, str or None, default=None
    exponents : array-like, str or None, default=None
        Bounded positive exponents ``p``; ``None`` means ``p = e``.
    horizon : int or None, default=None
        Number of leading terms examined; ``None`` uses all of them.
    tol : float, default=1e-6
    """

    classes_ = np.array([v.value for v in Verdict])

    def __init__(self, tau=0.0, weights=None, exponents=None, horizon=None, tol=1e-6):
        self.tau = tau
        self.weights = weights
        self.exponents = exponents
        self.horizon = horizon
        self.tol = tol

    def fit(self, X, y=None):
        self._fit_common(X)
        self.exponents_ = _resolve_exponents(self.exponents, self.n_features_in_)
        self.matrix_ = forward_matrix(self.tau, self.weights_, self.n_features_in_)
        return self

    def _images(self, X):
        X = self._check_X(X)
        return [mat_apply(self.matrix_, x) for x in X]

    def classify(self, X):
        """Full :class:`ClassificationReport` per row."""
        return [classify_image(y, self.exponents_, horizon=self.horizon, tol=self.tol) for y in self._images(X)]

    def predict(self, X):
        return np.array([r.verdict.value for r in self.classify(X)])

    def paranorm(self, X):
        return np.array([image_paranorm(y, self.exponents_) for y in self._images(X)], dtype=DTYPE)
