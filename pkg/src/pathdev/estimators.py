"""Scikit-learn style estimators wrapping the functional pipeline.

Series are represented as (n_series, n_points, d) arrays or lists of
(n_points, d) arrays; the transformers keep the container type of their
input.  Hyperparameters are stored verbatim in ``__init__`` so
``get_params``/``set_params``/``clone`` behave as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .dataset import Dataset, Sample
from .development import forward_stack
from .metrics import classify
from .model import TrainConfig, predict_proba_samples, train
from .sampling import smote
from .validation import check_series
from .wavelet import WaveletSpec, dwt_denoise


def _as_series_list(X):
    if isinstance(X, np.ndarray) and X.ndim == 3:
        return [X[i] for i in range(X.shape[0])], True
    if isinstance(X, (list, tuple)):
        return [check_series(x, f"X[{i}]") for i, x in enumerate(X)], False
    raise ValueError(
        "X must be a (n_series, n_points, d) array or a list of (n_points, d) arrays"
    )


class WaveletDenoiser(TransformerMixin, BaseEstimator):
    """Per-channel db6 wavelet denoising as a stateless transformer.

    Parameters
    ----------
    levels : int, default=4
        Decomposition depth.
    """

    def __init__(self, levels=4):
        self.levels = levels

    def fit(self, X, y=None):
        self.spec_ = WaveletSpec(levels=self.levels)
        return self

    def transform(self, X):
        if not hasattr(self, "spec_"):
            self.fit(X)
        series, was_array = _as_series_list(X)
        out = [dwt_denoise(x, self.spec_) for x in series]
        return np.stack(out) if was_array else out


class SmoteOversampler(BaseEstimator):
    """Balance a binary dataset by interpolating minority rows.

    Operates on 2-D feature matrices (flatten series first, or let
    :class:`PathDevelopmentClassifier` handle augmentation upstream).

    Parameters
    ----------
    k : int, default=5
        Neighborhood size.
    random_state : int, default=0
    """

    def __init__(self, k=5, random_state=0):
        self.k = k
        self.random_state = random_state

    def fit_resample(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=int)
        if X.ndim != 2 or len(X) != len(y):
            raise ValueError("X must be 2-D with one row per label")
        counts = {cls: int((y == cls).sum()) for cls in (0, 1)}
        minority = 0 if counts[0] < counts[1] else 1
        deficit = counts[1 - minority] - counts[minority]
        if deficit <= 0:
            return X.copy(), y.copy()
        synthetic = smote(
            X[y == minority],
            k=min(self.k, counts[minority] - 1),
            target_count=deficit,
            seed=self.random_state,
        )
        X_out = np.vstack([X, synthetic])
        y_out = np.concatenate([y, np.full(deficit, minority)])
        return X_out, y_out


class PathDevelopmentClassifier(ClassifierMixin, BaseEstimator):
    """Binary classifier: development layer endpoint + dense softmax head.

    ``fit`` holds out a stratified validation fraction, trains with Adam
    under the algebra constraint, and keeps the epoch snapshot with the
    best validation specificity among thresholds that preserve NPV = 1.
    ``predict`` applies the selected decision threshold: a series is
    called negative exactly when its positive-class probability falls
    below ``threshold_``.

    Parameters
    ----------
    algebra : {"so", "sl", "sp", "gl"}, default="so"
    dev_order : int, default=8
        Matrix order of the development layer.
    hidden_width : int, default=16
        Hidden units in the dense head.
    lr, epochs, batch_size, l2_weight : optimizer settings.
    validation_fraction : float, default=0.1
        Share of the fit data held out for threshold selection.
    random_state : int, default=0
    """

    def __init__(
        self,
        algebra="so",
        dev_order=8,
        hidden_width=16,
        lr=0.001,
        epochs=100,
        batch_size=32,
        l2_weight=0.0,
        validation_fraction=0.1,
        random_state=0,
    ):
        self.algebra = algebra
        self.dev_order = dev_order
        self.hidden_width = hidden_width
        self.lr = lr
        self.epochs = epochs
        self.batch_size = batch_size
        self.l2_weight = l2_weight
        self.validation_fraction = validation_fraction
        self.random_state = random_state

    def _check_fitted(self):
        if not hasattr(self, "params_"):
            raise NotFittedError("this PathDevelopmentClassifier is not fitted yet")

    def fit(self, X, y):
        series, _ = _as_series_list(X)
        y = np.asarray(y, dtype=int)
        if len(series) != len(y):
            raise ValueError("X and y must have equal length")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ValueError("validation_fraction must lie in (0, 1)")
        if set(np.unique(y)) - {0, 1}:
            raise ValueError("labels must be binary 0/1")

        rng = np.random.default_rng(self.random_state)
        tags = np.array(["train"] * len(series), dtype=object)
        for cls in (0, 1):
            idx = np.flatnonzero(y == cls)
            n_val = max(1, int(len(idx) * self.validation_fraction)) if len(idx) else 0
            tags[rng.permutation(idx)[:n_val]] = "validation"
        data = Dataset(
            tuple(
                Sample(series_id=f"fit_{i:06d}", series=s, label=int(label), split=tag)
                for i, (s, label, tag) in enumerate(zip(series, y, tags))
            )
        )
        cfg = TrainConfig(
            lr=self.lr,
            epochs=self.epochs,
            batch_size=self.batch_size,
            l2_weight=self.l2_weight,
            seed=self.random_state,
        )
        result = train(data, self.algebra, self.dev_order, cfg, hidden_width=self.hidden_width)
        self.params_ = result.params
        self.head_ = result.head
        self.threshold_ = result.threshold
        self.report_ = result.report
        self.trace_ = result.trace
        self.classes_ = np.array([0, 1])
        return self

    def predict_proba(self, X):
        self._check_fitted()
        series, _ = _as_series_list(X)
        samples = [
            Sample(series_id=f"p{i}", series=s, label=0) for i, s in enumerate(series)
        ]
        return predict_proba_samples(self.params_, self.head_, samples)

    def predict(self, X):
        return classify(self.predict_proba(X)[:, 1], self.threshold_)

    def transform_endpoints(self, X):
        """Development endpoints (n_series, m, m) under the fitted generators."""
        self._check_fitted()
        series, _ = _as_series_list(X)
        out = np.empty((len(series), self.params_.order, self.params_.order))
        for i, s in enumerate(series):
            out[i] = forward_stack(self.params_, s[None])[0]
        return out
