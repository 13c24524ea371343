"""Linear prediction head and RMSE scoring.

The selected variables are evaluated with ordinary least squares plus
an intercept. The intercept matters even on standardized training
data: biased selection shifts the response mean of test environments.
"""

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import SingularDesign

_COND_LIMIT = 1e10
_RIDGE = 1e-8


@dataclass(frozen=True)
class LinearModel:
    """OLS fit restricted to a subset of predictor columns.

    ``regularized`` marks models that needed the ridge fallback because
    the normal system was ill-conditioned (for example duplicate
    columns in the selection).
    """

    coefficients: np.ndarray
    intercept: float
    column_indices: tuple
    regularized: bool = False

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=np.float64)
        if coef.ndim != 1 or coef.shape[0] != len(self.column_indices):
            raise ValueError("one coefficient per selected column required")
        if not np.all(np.isfinite(coef)) or not np.isfinite(self.intercept):
            raise ValueError("model parameters must be finite")
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "column_indices", tuple(int(i) for i in self.column_indices))

    def predict(self, d: Dataset) -> np.ndarray:
        X = d.predictors[:, list(self.column_indices)]
        return X @ self.coefficients + self.intercept


def ols_fit(d: Dataset, idx) -> LinearModel:
    """Least-squares fit of the response on the selected columns.

    Solves the normal equations; if their condition number exceeds
    1e10 (rank deficiency, duplicated columns), refits with a ridge
    regularizer of 1e-8 and marks the model.
    """
    idx = [int(i) for i in idx]
    if len(idx) == 0:
        raise ValueError("need at least one column")
    for i in idx:
        if not 0 <= i < d.p:
            raise ValueError(f"column index {i} out of range")
    if d.n <= len(idx) + 1:
        raise ValueError(f"need more than {len(idx) + 1} rows, got {d.n}")
    A = np.column_stack([np.ones(d.n), d.predictors[:, idx]])
    # overflow here surfaces as SingularDesign below, not as a warning
    with np.errstate(over="ignore", invalid="ignore"):
        G = A.T @ A
        b = A.T @ d.response
    if not (np.all(np.isfinite(G)) and np.all(np.isfinite(b))):
        raise SingularDesign("normal equations overflow")
    regularized = False
    if np.linalg.cond(G) > _COND_LIMIT:
        G = G + _RIDGE * np.eye(G.shape[0])
        regularized = True
    try:
        theta = np.linalg.solve(G, b)
    except np.linalg.LinAlgError as exc:
        raise SingularDesign(str(exc)) from None
    if not np.all(np.isfinite(theta)):
        raise SingularDesign("non-finite solution")
    return LinearModel(theta[1:], float(theta[0]), tuple(idx), regularized)


def rmse(m: LinearModel, d: Dataset) -> float:
    """Root mean squared prediction error over all rows of d."""
    resid = d.response - m.predict(d)
    return float(np.sqrt(np.mean(resid**2)))
