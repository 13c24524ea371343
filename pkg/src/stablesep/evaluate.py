"""Evaluation metrics: precision@k, unstable-variable rank, and the
across-environment error summary (mean RMSE and its n-1 spread).
"""

from dataclasses import dataclass, field

import numpy as np

from .data import VariableRanking
from .errors import IndexOutOfRange, KTooLarge, TooFewEnvironments


def precision_at_k(r: VariableRanking, truth, k: int) -> float:
    """Fraction of the top-k ranked variables that are truly causal."""
    truth = set(int(i) for i in truth)
    if not truth:
        raise ValueError("truth set must be nonempty")
    if not 1 <= k <= r.p:
        raise KTooLarge(f"k={k} not in [1, {r.p}]")
    hits = sum(1 for i in r.order[:k] if i in truth)
    return hits / k


def unstable_rank(r: VariableRanking, unstable_idx: int) -> int:
    """1-based position of the unstable variable; larger is better."""
    unstable_idx = int(unstable_idx)
    if not 0 <= unstable_idx < r.p:
        raise IndexOutOfRange(f"index {unstable_idx} out of range for p={r.p}")
    return r.order.index(unstable_idx) + 1


def average_error(rmses) -> float:
    """Mean RMSE over environments."""
    rmses = [float(v) for v in rmses]
    if not rmses:
        raise ValueError("need at least one environment")
    return float(np.mean(rmses))


def stability_error(rmses) -> float:
    """Spread of RMSE over environments: sqrt(sum((e - mean)^2) / (m - 1))."""
    rmses = [float(v) for v in rmses]
    if len(rmses) < 2:
        raise TooFewEnvironments("need at least two environments")
    mean = np.mean(rmses)
    return float(np.sqrt(np.sum((np.asarray(rmses) - mean) ** 2) / (len(rmses) - 1)))


@dataclass(frozen=True)
class EvaluationReport:
    """Bundle of the evaluation metrics for one method/run."""

    precision_at_k: float
    unstable_rank: int
    per_env_rmse: dict
    average_error: float
    stability_error: float
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = list(self.per_env_rmse.values())
        if vals and abs(self.average_error - np.mean(vals)) > 1e-12:
            raise ValueError("average_error must equal the mean of per_env_rmse")
        if self.stability_error < 0:
            raise ValueError("stability_error must be nonnegative")

    @classmethod
    def build(cls, precision, rank, per_env_rmse, **extras) -> "EvaluationReport":
        vals = list(per_env_rmse.values())
        return cls(
            precision_at_k=float(precision),
            unstable_rank=int(rank),
            per_env_rmse=dict(per_env_rmse),
            average_error=average_error(vals),
            stability_error=stability_error(vals),
            extras=dict(extras),
        )
