"""Synthetic environments: an SCM with causal and non-causal blocks
plus a biased row-selection mechanism that manufactures spurious
correlation between the response and one designated non-causal column.

All randomness flows through a counter-based Philox generator seeded
from the environment spec, so identical specs give identical datasets
byte for byte.
"""

import math
from dataclasses import dataclass

import numpy as np

from .data import ROLE_CAUSAL, ROLE_NONCAUSAL, ROLE_UNSTABLE, Dataset
from .errors import SelectionCollapse

# response noise: Normal with variance 0.3
_NOISE_SD = math.sqrt(0.3)
_PILOT_ROWS = 2000
_MAX_OVERSAMPLE = 20.0


@dataclass(frozen=True)
class EnvironmentSpec:
    """Parameters defining one synthetic environment.

    r is the bias rate: None for unbiased data, otherwise a value with
    1 < |r| <= 3 whose sign sets the direction of the induced spurious
    correlation and whose magnitude sets its strength.
    """

    n: int
    p: int
    r: float = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.p < 4:
            raise ValueError("p must be at least 4")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.r is not None:
            if not 1.0 < abs(self.r) <= 3.0:
                raise ValueError("bias rate must satisfy 1 < |r| <= 3")


def make_rng(seed) -> np.random.Generator:
    """Counter-based generator used everywhere in this module."""
    return np.random.Generator(np.random.Philox(seed))


def num_causal(p: int) -> int:
    """Number of causal columns: round(0.3 * p)."""
    return int(round(0.3 * p))


@dataclass(frozen=True)
class PredictorBlock:
    """Predictor matrix plus names and role tags (no response yet)."""

    predictors: np.ndarray
    names: tuple
    roles: tuple


def gen_predictors(n: int, p: int, rng) -> PredictorBlock:
    """Draw the causal and non-causal predictor blocks.

    Each block is built from its own iid standard-normal auxiliary
    matrix Z with p columns: column i of the block is
    0.8 * Z[:, i] + 0.2 * Z[:, i + 1], giving unit-free variables with
    variance 0.68 and correlation 4/17 between adjacent columns. The
    two blocks are independent of each other. The last non-causal
    column is tagged as the unstable one used by biased selection.
    """
    if p < 4:
        raise ValueError("p must be at least 4")
    p_c = num_causal(p)
    p_n = p - p_c
    z_c = rng.normal(size=(n, p))
    z_n = rng.normal(size=(n, p))
    C = 0.8 * z_c[:, :p_c] + 0.2 * z_c[:, 1 : p_c + 1]
    N = 0.8 * z_n[:, :p_n] + 0.2 * z_n[:, 1 : p_n + 1]
    names = tuple(f"C{i}" for i in range(1, p_c + 1)) + tuple(
        f"N{j}" for j in range(1, p_n + 1)
    )
    roles = (ROLE_CAUSAL,) * p_c + (ROLE_NONCAUSAL,) * (p_n - 1) + (ROLE_UNSTABLE,)
    return PredictorBlock(np.hstack([C, N]), names, roles)


def response_mean(C) -> np.ndarray:
    """Noise-free response surface over the causal block.

    Linear part: sum over i = 1..p_c of alpha_i * C_i with
    alpha_i = (-1)^i * p_c / i. Nonlinear part: for every j = 1..p_c
    with j mod 3 == 1, add exp(C_j * C_{j+1} * C_{j+2}) where the
    product indices wrap around modulo p_c so every factor stays inside
    the causal block.
    """
    C = np.asarray(C, dtype=np.float64)
    n, p_c = C.shape
    if p_c < 3:
        raise ValueError("need at least 3 causal columns")
    i = np.arange(1, p_c + 1)
    alpha = (-1.0) ** i * p_c / i
    out = C @ alpha
    for j in range(1, p_c + 1):
        if j % 3 == 1:
            a, b, c = (j - 1) % p_c, j % p_c, (j + 1) % p_c
            out = out + np.exp(C[:, a] * C[:, b] * C[:, c])
    return out


def gen_response(C, rng) -> np.ndarray:
    """response_mean plus Normal(0, 0.3)-variance noise."""
    C = np.asarray(C, dtype=np.float64)
    return response_mean(C) + rng.normal(0.0, _NOISE_SD, size=C.shape[0])


def selection_probability(y, unstable, r) -> np.ndarray:
    """Per-row keep probability |r|^(-5 * D) with D = |Y - sign(r) * N|."""
    d = np.abs(np.asarray(y) - np.sign(r) * np.asarray(unstable))
    return np.abs(r) ** (-5.0 * d)


def biased_select(d: Dataset, r: float, rng) -> Dataset:
    """Keep each row independently with the selection probability.

    Rows where the response and the unstable column (sign-adjusted)
    agree survive almost surely; rows where they disagree are dropped
    aggressively, which is what creates the spurious correlation. If a
    draw keeps fewer than 10% of the rows it is retried with fresh
    randomness up to 5 times; the best draw is then accepted unless it
    kept fewer than max(50, 2% of n) rows, in which case the selection
    has collapsed.
    """
    if abs(r) <= 1.0:
        raise ValueError("bias rate must satisfy |r| > 1")
    un_idx = d.unstable_index()
    if un_idx is None:
        raise ValueError("dataset has no unstable non-causal column")
    prob = selection_probability(d.response, d.predictors[:, un_idx], r)
    n = d.n
    best = None
    for _ in range(6):
        mask = rng.uniform(size=n) < prob
        kept = int(mask.sum())
        if best is None or kept > best[1]:
            best = (mask, kept)
        if kept >= 0.10 * n:
            break
    mask, kept = best
    if kept < max(50, int(math.ceil(0.02 * n))):
        raise SelectionCollapse(
            f"kept {kept} of {n} rows at r={r}; bias too strong for this pool"
        )
    return Dataset(d.predictors[mask], d.response[mask], d.names, d.roles)


def make_environment(spec: EnvironmentSpec) -> Dataset:
    """Generate one environment according to the spec.

    Unbiased (r is None): exactly spec.n rows. Biased: a pilot sample
    estimates the expected keep rate, the pre-selection pool is
    oversampled by its inverse (10% headroom, capped at 20x), and the
    selected rows are truncated to spec.n when the draw overshoots, so
    the result has approximately spec.n rows.
    """
    rng = make_rng(spec.rng_seed)
    if spec.r is None:
        block = gen_predictors(spec.n, spec.p, rng)
        p_c = num_causal(spec.p)
        y = gen_response(block.predictors[:, :p_c], rng)
        return Dataset(block.predictors, y, block.names, block.roles)

    p_c = num_causal(spec.p)
    pilot = gen_predictors(_PILOT_ROWS, spec.p, rng)
    pilot_y = gen_response(pilot.predictors[:, :p_c], rng)
    e_keep = selection_probability(pilot_y, pilot.predictors[:, -1], spec.r).mean()
    factor = min(_MAX_OVERSAMPLE, 1.1 / max(e_keep, 1e-12))
    pool = int(math.ceil(spec.n * factor))

    block = gen_predictors(pool, spec.p, rng)
    y = gen_response(block.predictors[:, :p_c], rng)
    full = Dataset(block.predictors, y, block.names, block.roles)
    selected = biased_select(full, spec.r, rng)
    if selected.n > spec.n:
        selected = Dataset(
            selected.predictors[: spec.n],
            selected.response[: spec.n],
            selected.names,
            selected.roles,
        )
    return selected
