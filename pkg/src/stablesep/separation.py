"""Causal/non-causal separation by one CI test per variable.

The core idea: pick one variable known to be causal (the seed), then
test every other variable against the seed *conditioned on the
response*. The response is a collider between its causes, so causal
variables become dependent on the seed given the response (small
p-value) while non-causal variables stay independent (large p-value),
even under biased sample selection. Ranking by ascending p-value
therefore puts causal variables first.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .citest import (
    METHOD_FISHER_Z,
    METHOD_RCIT,
    RcitParams,
    fisher_z_test,
    rcit_test,
)
from .data import Dataset, VariableRanking
from .errors import DegenerateInput, KTooLarge

AUTO_SEED = "auto"

# significance threshold for counting conditional-dependence partners
# in seed discovery; strict enough that a spurious partner needs
# |partial correlation| around 0.09 even at n = 2000
_PARTNER_ALPHA = 1e-4


@dataclass(frozen=True)
class SeparationConfig:
    """Configuration for :func:`rank_by_ci`.

    seed_variable is either an integer column index (prior knowledge of
    one causal variable) or ``"auto"`` to discover one. k is the number
    of variables downstream selection keeps.
    """

    seed_variable: object = AUTO_SEED
    method: str = METHOD_FISHER_Z
    k: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.method not in (METHOD_FISHER_Z, METHOD_RCIT):
            raise ValueError(f"unknown method {self.method!r}")
        if self.seed_variable != AUTO_SEED and int(self.seed_variable) < 0:
            raise ValueError("seed_variable must be 'auto' or a nonnegative index")
        if self.k < 1:
            raise ValueError("k must be positive")


def _resolve_seed(d: Dataset, cfg: SeparationConfig) -> int:
    if cfg.seed_variable == AUTO_SEED:
        return discover_seed(d)
    seed = int(cfg.seed_variable)
    if seed >= d.p:
        raise ValueError(f"seed index {seed} out of range for p={d.p}")
    return seed


def rank_by_ci(d: Dataset, cfg: SeparationConfig, on_test=None) -> VariableRanking:
    """Rank all variables by their CI-test p-value against the seed.

    Every variable i != seed is scored by the p-value of the test
    "X_i independent of X_seed given Y"; the seed itself scores 0 and
    ranks first among exact ties. A variable whose test degenerates
    (for example a column collinear with the seed after selection)
    receives score 1 and a diagnostic flag instead of aborting the
    whole ranking.

    Parameters
    ----------
    d : Dataset
        Standardized data.
    cfg : SeparationConfig
    on_test : callable, optional
        Called as ``on_test(i)`` after each executed CI test; used by
        instrumentation to verify the p - 1 test count.
    """
    seed = _resolve_seed(d, cfg)
    X = d.predictors
    y = d.response
    scores = np.ones(d.p)
    flags = [None] * d.p
    scores[seed] = 0.0
    for i in range(d.p):
        if i == seed:
            continue
        try:
            if cfg.method == METHOD_RCIT:
                # per-variable child seed so tests are independent and
                # the merged ranking is deterministic
                child = np.random.SeedSequence([cfg.rng_seed, i]).generate_state(1, np.uint64)[0]
                res = rcit_test(X[:, i], X[:, seed], y, RcitParams(rng_seed=int(child)))
            else:
                res = fisher_z_test(X[:, i], X[:, seed], y)
            scores[i] = res.p_value
            if res.method not in (METHOD_FISHER_Z, METHOD_RCIT):
                flags[i] = res.method
        except DegenerateInput as exc:
            scores[i] = 1.0
            flags[i] = f"degenerate: {exc}"
        if on_test is not None:
            on_test(i)

    # seed first among exact score ties, then ascending index
    order = sorted(range(d.p), key=lambda j: (scores[j], j != seed, j))
    return VariableRanking(
        tuple(order),
        tuple(float(scores[j]) for j in order),
        tuple(flags[j] for j in order),
    )


def select_top_k(r: VariableRanking, k: int):
    """First k indices of the ranking."""
    if not 1 <= k <= r.p:
        raise KTooLarge(f"k={k} not in [1, {r.p}]")
    return list(r.order[:k])


def _normal_scores(m):
    # rank transform to normal scores; tames the heavy-tailed response
    # produced by exponential terms without changing dependence structure
    ranks = stats.rankdata(m, axis=0)
    return stats.norm.ppf((ranks - 0.5) / m.shape[0])


def discover_seed(d: Dataset) -> int:
    """Pick one variable that is very likely causal, with no oracle.

    Causal variables are all pairwise dependent given the response
    (the response is their shared collider; adjacent ones also share
    generator noise), while a non-causal variable is conditionally
    dependent only on its own few neighbours -- crucially, this holds
    under biased selection too, where naive effect estimates latch onto
    the spurious proxy. So: count, for each variable, how many other
    variables are dependent on it given Y (Fisher-z on normal-scored
    data, threshold 1e-4), and return the variable with the most
    partners. Ties break by larger |corr(X_j, Y)|, then by index, which
    also resolves the degenerate single-signal case where no variable
    has any partner.
    """
    n, p = d.n, d.p
    if n < 50:
        raise ValueError(f"need at least 50 rows, got {n}")
    m = np.column_stack([d.predictors, d.response])
    if np.any(np.ptp(m, axis=0) == 0.0):
        raise DegenerateInput("constant column")
    m = _normal_scores(m)
    R = np.corrcoef(m, rowvar=False)
    r_jy = R[:p, p]

    # all pairwise partial correlations given Y in one shot
    denom = np.sqrt(np.clip(1.0 - r_jy**2, 1e-12, None))
    P = (R[:p, :p] - np.outer(r_jy, r_jy)) / np.outer(denom, denom)
    P = np.clip(P, -1.0 + 1e-12, 1.0 - 1e-12)
    zstat = np.sqrt(n - 4.0) * np.arctanh(P)
    pv = 2.0 * stats.norm.sf(np.abs(zstat))
    np.fill_diagonal(pv, 1.0)

    counts = (pv < _PARTNER_ALPHA).sum(axis=1)
    cand = np.nonzero(counts == counts.max())[0]
    best = min(cand, key=lambda j: (-abs(r_jy[j]), j))
    return int(best)


def correlation_ranking(d: Dataset) -> VariableRanking:
    """Baseline: rank by descending |Pearson correlation with Y|.

    Scores are stored as 1 - |corr| so the ranking keeps its
    ascending-score invariant. Under selection bias this baseline
    promotes the spuriously correlated non-causal variable.
    """
    X = d.predictors
    y = d.response - d.response.mean()
    sy = np.sqrt(y @ y)
    Xc = X - X.mean(axis=0)
    sx = np.sqrt((Xc**2).sum(axis=0))
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = (Xc.T @ y) / (sx * sy)
    corr = np.nan_to_num(corr, nan=0.0)
    return VariableRanking.from_scores(np.clip(1.0 - np.abs(corr), 0.0, 1.0))
