"""Reference numpy implementations of the numerical kernels.

These are the fallback backend; the Cython module in ``_cy.pyx``
implements the same four functions with identical signatures. All
randomness is drawn by callers and passed in as arrays, so both
backends produce matching results from the same inputs.
"""

import numpy as np


def pearson_triple(x, y, z):
    """Return (r_xy, r_xz, r_yz) for three equal-length vectors.

    A zero-variance vector yields nan correlations; callers are
    expected to reject constant input beforehand.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    xc = x - x.mean()
    yc = y - y.mean()
    zc = z - z.mean()
    sx = np.sqrt(xc @ xc)
    sy = np.sqrt(yc @ yc)
    sz = np.sqrt(zc @ zc)
    return (
        float((xc @ yc) / (sx * sy)),
        float((xc @ zc) / (sx * sz)),
        float((yc @ zc) / (sy * sz)),
    )


def rff_transform(v, w, b, scale):
    """Random Fourier feature map: scale * cos(outer(v, w) + b)."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return scale * np.cos(np.outer(v, w) + b)


def median_pairwise_distance(v):
    """Median of |v_i - v_j| over all distinct index pairs i < j."""
    v = np.asarray(v, dtype=np.float64)
    n = v.shape[0]
    iu = np.triu_indices(n, k=1)
    d = np.abs(v[iu[0]] - v[iu[1]])
    return float(np.median(d))


def rowwise_outer(a, b):
    """Row-wise outer products flattened to an (n, ma*mb) matrix."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = a.shape[0]
    return (a[:, :, None] * b[:, None, :]).reshape(n, -1)
