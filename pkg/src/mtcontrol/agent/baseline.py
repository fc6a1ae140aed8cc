"""Linear-feature value baseline fitted by ridge least squares."""

from __future__ import annotations

import numpy as np


class LinearFeatureBaseline:
    """Least-squares predictor on [obs, obs^2, t/T, (t/T)^2, (t/T)^3, 1].

    Before the first fit it predicts zero everywhere. The ridge term keeps
    the solve well-posed for constant features and short batches.
    """

    def __init__(self, ridge: float = 1.0e-5):
        self.ridge = float(ridge)
        self._coeffs: np.ndarray | None = None

    @staticmethod
    def features(observations: np.ndarray, lengths, horizon: int) -> np.ndarray:
        obs = np.asarray(observations, dtype=np.float64)
        t = np.concatenate([np.arange(n, dtype=np.float64) for n in lengths])
        t = t / float(horizon)
        return np.column_stack([obs, obs ** 2, t, t ** 2, t ** 3,
                                np.ones_like(t)])

    def fit(self, observations: np.ndarray, lengths, horizon: int,
            targets: np.ndarray) -> None:
        phi = self.features(observations, lengths, horizon)
        n_feat = phi.shape[1]
        # ridge via stacked least squares (the tests check this against an
        # explicit normal-equation solve)
        a = np.vstack([phi, np.sqrt(self.ridge) * np.eye(n_feat)])
        b = np.concatenate([np.asarray(targets, dtype=np.float64),
                            np.zeros(n_feat)])
        self._coeffs, *_ = np.linalg.lstsq(a, b, rcond=None)

    def predict(self, observations: np.ndarray, lengths,
                horizon: int) -> np.ndarray:
        n = int(np.sum(lengths))
        if self._coeffs is None:
            return np.zeros(n)
        return self.features(observations, lengths, horizon) @ self._coeffs
