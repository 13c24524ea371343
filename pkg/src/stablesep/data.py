"""Core data containers and column-wise preprocessing.

A :class:`Dataset` bundles an n x p predictor matrix with a length-n
response vector, unique variable names, and optional ground-truth role
tags. Instances are immutable after construction (arrays are marked
read-only), so they are safe to share across concurrent readers.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantColumn, IndexOutOfRange

ROLE_CAUSAL = "causal"
ROLE_NONCAUSAL = "non_causal"
ROLE_UNSTABLE = "unstable_non_causal"
ROLE_UNKNOWN = "unknown"
_ROLES = frozenset({ROLE_CAUSAL, ROLE_NONCAUSAL, ROLE_UNSTABLE, ROLE_UNKNOWN})

RESPONSE_NAME = "response"


def _readonly(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """Predictor matrix plus response vector with names and role tags.

    Parameters
    ----------
    predictors : (n, p) array_like
        Real-valued predictor columns.
    response : (n,) array_like
        Real-valued response.
    names : sequence of str
        One unique label per predictor column.
    roles : sequence of str, optional
        Per-column ground-truth tags; one of ``causal``, ``non_causal``,
        ``unstable_non_causal``, ``unknown``. ``None`` when unknown.
    """

    predictors: np.ndarray
    response: np.ndarray
    names: tuple
    roles: tuple = None

    def __post_init__(self):
        X = np.asarray(self.predictors, dtype=np.float64)
        y = np.asarray(self.response, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("predictors must be a 2-d matrix")
        if y.ndim != 1:
            raise ValueError("response must be a 1-d vector")
        n, p = X.shape
        if n != y.shape[0]:
            raise ValueError(f"row mismatch: {n} predictor rows vs {y.shape[0]} responses")
        if n < 2 or p < 2:
            raise ValueError(f"need n >= 2 and p >= 2, got n={n}, p={p}")
        if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
            raise ValueError("non-finite entries are not allowed")
        names = tuple(str(s) for s in self.names)
        if len(names) != p:
            raise ValueError(f"{len(names)} names for {p} columns")
        if len(set(names)) != p:
            raise ValueError("variable names must be unique")
        roles = self.roles
        if roles is not None:
            roles = tuple(roles)
            if len(roles) != p:
                raise ValueError(f"{len(roles)} roles for {p} columns")
            bad = set(roles) - _ROLES
            if bad:
                raise ValueError(f"unknown role tags: {sorted(bad)}")
        object.__setattr__(self, "predictors", _readonly(X))
        object.__setattr__(self, "response", _readonly(y))
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "roles", roles)

    @property
    def n(self) -> int:
        return self.predictors.shape[0]

    @property
    def p(self) -> int:
        return self.predictors.shape[1]

    def causal_indices(self):
        """Indices tagged causal, or None when roles are absent."""
        if self.roles is None:
            return None
        return [i for i, r in enumerate(self.roles) if r == ROLE_CAUSAL]

    def unstable_index(self):
        """Index of the unstable non-causal column, or None."""
        if self.roles is None:
            return None
        hits = [i for i, r in enumerate(self.roles) if r == ROLE_UNSTABLE]
        return hits[0] if hits else None


@dataclass(frozen=True)
class Scaler:
    """Column means and standard deviations learned from one dataset.

    The same affine map is re-applied to other datasets (test
    environments are never re-standardized on their own statistics).
    Standard deviations use the n-1 denominator.
    """

    predictor_mean: np.ndarray
    predictor_sd: np.ndarray
    response_mean: float
    response_sd: float

    @classmethod
    def fit(cls, d: Dataset) -> "Scaler":
        mu = d.predictors.mean(axis=0)
        sd = d.predictors.std(axis=0, ddof=1)
        for j in np.nonzero(sd == 0.0)[0]:
            raise ConstantColumn(d.names[j])
        ry_sd = float(d.response.std(ddof=1))
        if ry_sd == 0.0:
            raise ConstantColumn(RESPONSE_NAME)
        return cls(_readonly(mu), _readonly(sd), float(d.response.mean()), ry_sd)

    def transform(self, d: Dataset) -> Dataset:
        if d.p != self.predictor_mean.shape[0]:
            raise ValueError("scaler was fit on a different column count")
        X = (d.predictors - self.predictor_mean) / self.predictor_sd
        y = (d.response - self.response_mean) / self.response_sd
        return Dataset(X, y, d.names, d.roles)


def standardize(d: Dataset) -> Dataset:
    """Z-score every predictor column and the response (ddof=1).

    Raises
    ------
    ConstantColumn
        If any column (or the response) has zero sample variance.
    """
    return Scaler.fit(d).transform(d)


def select_columns(d: Dataset, idx) -> Dataset:
    """Subset/reorder predictor columns; the response is unchanged.

    ``idx`` must contain distinct in-range indices.
    """
    idx = [int(i) for i in idx]
    if len(set(idx)) != len(idx):
        raise ValueError("column indices must be distinct")
    for i in idx:
        if not 0 <= i < d.p:
            raise IndexOutOfRange(f"index {i} out of range for p={d.p}")
    names = tuple(d.names[i] for i in idx)
    roles = None if d.roles is None else tuple(d.roles[i] for i in idx)
    return Dataset(d.predictors[:, idx], d.response, names, roles)


@dataclass(frozen=True)
class VariableRanking:
    """Permutation of variable indices ordered by ascending score.

    ``scores`` aligns with ``order`` (scores[j] belongs to variable
    order[j]) and is nondecreasing. ``flags`` carries an optional
    diagnostic string per position (e.g. a degenerate CI test or a
    small-sample fallback); None means a clean test.
    """

    order: tuple
    scores: tuple
    flags: tuple = field(default=None)

    def __post_init__(self):
        order = tuple(int(i) for i in self.order)
        p = len(order)
        if sorted(order) != list(range(p)):
            raise ValueError("order must be a permutation of 0..p-1")
        scores = tuple(float(s) for s in self.scores)
        if len(scores) != p:
            raise ValueError("scores length must match order")
        for s in scores:
            if not 0.0 <= s <= 1.0:
                raise ValueError(f"score {s} outside [0, 1]")
        if any(a > b for a, b in zip(scores, scores[1:])):
            raise ValueError("scores must be nondecreasing along order")
        flags = self.flags
        if flags is not None:
            flags = tuple(flags)
            if len(flags) != p:
                raise ValueError("flags length must match order")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "flags", flags)

    @property
    def p(self) -> int:
        return len(self.order)

    @classmethod
    def from_scores(cls, scores_by_index, flags_by_index=None) -> "VariableRanking":
        """Build a ranking from per-variable scores.

        Ties break by ascending variable index so rankings are
        deterministic and reproducible across runs.
        """
        scores = [float(s) for s in scores_by_index]
        order = sorted(range(len(scores)), key=lambda i: (scores[i], i))
        flags = None
        if flags_by_index is not None:
            flags = tuple(flags_by_index[i] for i in order)
        return cls(tuple(order), tuple(scores[i] for i in order), flags)
