"""Shared test utilities."""

import numpy as np


def exact_correlation_sample(n, R, seed=0):
    """Data whose *sample* correlation matrix equals R (to float eps).

    Draw a random n x d matrix, center it, orthonormalize with QR (the
    columns stay zero-mean), then color with the Cholesky factor of R.
    Scaling by sqrt(n - 1) makes every column have unit sample variance
    under the ddof=1 convention, so the sample correlation matrix is
    exactly R up to rounding.
    """
    R = np.asarray(R, dtype=np.float64)
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, R.shape[0]))
    A = A - A.mean(axis=0)
    Q, _ = np.linalg.qr(A)
    L = np.linalg.cholesky(R)
    return (Q @ L.T) * np.sqrt(n - 1.0)
