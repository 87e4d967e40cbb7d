"""Monte Carlo experiments tying words, subsequence lengths, and limits.

Every experiment draws each trial from its own counter-based stream
(stream id = trial index, plus an offset when an experiment has several
legs), so results are reproducible and independent of batch size or
evaluation order.  Words are processed in blocks; one trial in a hundred
is re-measured with the patience route as a cross-check on the vectorized
combinatorial one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, chain, laws, lis
from .errors import ConsistencyError, ParameterError

EXPERIMENT_KINDS = ("li-law", "shape-joint", "moment-check", "drift-vanish")

# cap on elements per sampled block, keeps peak memory near 100 MB
_BATCH_ELEMENTS = 8_000_000
_SPOT_CHECK_EVERY = 100


@dataclass(frozen=True)
class ExperimentConfig:
    params: chain.ChainParams
    n: int
    trials: int
    seed: int
    kind: str = "li-law"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"word length must be >= 1, got {self.n}")
        if self.trials < 1:
            raise ParameterError(f"trial count must be >= 1, got {self.trials}")
        if self.kind not in EXPERIMENT_KINDS:
            raise ParameterError(
                f"unknown experiment kind {self.kind!r}, expected one of {EXPERIMENT_KINDS}")


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Sorted sample with its empirical CDF."""

    samples: np.ndarray

    @classmethod
    def from_samples(cls, values) -> "EmpiricalDistribution":
        arr = np.sort(np.asarray(values, dtype=float))
        arr.flags.writeable = False
        return cls(arr)

    @property
    def count(self) -> int:
        return int(self.samples.size)

    def ecdf(self, x):
        return np.searchsorted(self.samples, np.asarray(x, dtype=float),
                               side="right") / self.count


@dataclass(frozen=True)
class KsResult:
    statistic: float
    count: int


def ks_statistic(emp: EmpiricalDistribution, cdf) -> KsResult:
    """Kolmogorov-Smirnov distance between the sample and a reference CDF:
    max_i max(|i/N - F(x_(i))|, |(i-1)/N - F(x_(i))|)."""
    xs = emp.samples
    n = xs.size
    if n == 0:
        raise ParameterError("empty sample")
    f = np.asarray(cdf(xs), dtype=float)
    i = np.arange(1, n + 1, dtype=float)
    d = np.maximum(np.abs(i / n - f), np.abs((i - 1.0) / n - f))
    return KsResult(float(d.max()), int(n))


def _letters_batches(params: chain.ChainParams, init: chain.InitialDistribution,
                     n: int, seed: int, trials: int, first_stream: int = 0):
    """Yield (start, block) pairs; block row j is trial start + j."""
    size = max(1, min(trials, _BATCH_ELEMENTS // (n + 1)))
    for start in range(0, trials, size):
        stop = min(start + size, trials)
        ids = range(first_stream + start, first_stream + stop)
        yield start, chain.sample_letters(params, init, n, seed, ids)


def li_values(cfg: ExperimentConfig) -> np.ndarray:
    """Per-trial subsequence lengths from the stationary start, in trial
    order (int64)."""
    init = chain.InitialDistribution.stationary(cfg.params)
    out = np.empty(cfg.trials, dtype=np.int64)
    for start, letters in _letters_batches(cfg.params, init, cfg.n, cfg.seed,
                                           cfg.trials):
        block = lis.binary_li_block(letters)
        first = (-start) % _SPOT_CHECK_EVERY
        for j in range(first, letters.shape[0], _SPOT_CHECK_EVERY):
            check = int(_kernels.patience_lis(letters[j].astype(np.int64)))
            if check != block[j]:
                raise ConsistencyError(
                    f"patience and combinatorial routes disagree on trial "
                    f"{start + j}: {check} vs {int(block[j])}")
        out[start:start + block.size] = block
    return out


def run_li_experiment(cfg: ExperimentConfig) -> EmpiricalDistribution:
    """Empirical law of (LI_n - n*pi_max)/sqrt(n) over cfg.trials words."""
    law = laws.limiting_law(cfg.params)
    li = li_values(cfg)
    scaled = (li - law.centering(cfg.n)) / law.scaling(cfg.n)
    return EmpiricalDistribution.from_samples(scaled)


@dataclass(frozen=True, eq=False)
class ShapeExperimentResult:
    """Centered, scaled two-row insertion shapes, in trial order.

    Row lengths satisfy r1 + r2 = n and pi_min = 1 - pi_max, so the two
    scaled coordinates are exact negations of each other; second_scaled
    is computed as -top_scaled to keep the pathwise sum at exactly 0.
    """

    n: int
    top_lengths: np.ndarray
    top_scaled: np.ndarray
    second_scaled: np.ndarray

    def marginals(self) -> tuple[EmpiricalDistribution, EmpiricalDistribution]:
        return (EmpiricalDistribution.from_samples(self.top_scaled),
                EmpiricalDistribution.from_samples(self.second_scaled))


def run_shape_experiment(cfg: ExperimentConfig) -> ShapeExperimentResult:
    """Joint fluctuation of both insertion-shape rows of a binary word."""
    law = laws.limiting_law(cfg.params)
    li = li_values(cfg)
    top_scaled = (li - law.centering(cfg.n)) / law.scaling(cfg.n)
    return ShapeExperimentResult(cfg.n, li, top_scaled, -top_scaled)


@dataclass(frozen=True)
class MomentRow:
    k: int
    mc_mean: float
    exact_mean: float
    mc_var: float
    exact_var: float
    se_mean: float
    se_var: float


def run_moment_check(cfg: ExperimentConfig, checkpoints) -> list[MomentRow]:
    """Sample mean/variance of the walk S_k at the given checkpoints
    against the closed forms, with standard errors for both.

    The variance SE combines the asymptotic formula (m4 - var^2)/T with a
    normal-theory floor of 2*var^2/(T-1); the floor matters for lattice
    walks at small k, where the two-point value distribution makes
    m4 - var^2 vanish identically.
    """
    if cfg.trials < 2:
        raise ParameterError("moment check needs at least 2 trials")
    ks = sorted({int(k) for k in checkpoints})
    if not ks:
        raise ParameterError("need at least one checkpoint")
    if ks[0] < 1 or ks[-1] > cfg.n:
        raise ParameterError(f"checkpoints must lie in 1..{cfg.n}, got {ks}")
    init = chain.InitialDistribution.stationary(cfg.params)
    cols = [k - 1 for k in ks]
    walks = np.empty((cfg.trials, len(ks)), dtype=np.int64)
    for start, letters in _letters_batches(cfg.params, init, cfg.n, cfg.seed,
                                           cfg.trials):
        z = 3 - 2 * letters.astype(np.int64)
        s = np.cumsum(z, axis=1)
        walks[start:start + s.shape[0]] = s[:, cols]
    rows = []
    for j, k in enumerate(ks):
        col = walks[:, j].astype(float)
        mc_mean = float(col.mean())
        mc_var = float(col.var(ddof=1))
        centered = col - mc_mean
        m4 = float(np.mean(centered ** 4))
        var_of_var = max((m4 - mc_var ** 2) / cfg.trials,
                         2.0 * mc_var ** 2 / (cfg.trials - 1))
        rows.append(MomentRow(
            k=k,
            mc_mean=mc_mean,
            exact_mean=chain.imbalance_mean(cfg.params, init, k),
            mc_var=mc_var,
            exact_var=chain.imbalance_variance(cfg.params, k),
            se_mean=math.sqrt(mc_var / cfg.trials),
            se_var=math.sqrt(var_of_var),
        ))
    return rows


def drift_functional_values(params: chain.ChainParams, n: int, trials: int,
                            seed: int, reverse: bool = False,
                            first_stream: int = 0) -> np.ndarray:
    """Per-trial maximum of the drift-corrected scaled walk.

    The walk is embedded as Bhat(k/n) = (S_k - k*mu)/(sigma_tilde*sqrt(n))
    and the drift rate is c_n = sqrt(n)*(pi_max - pi_min)/sigma_tilde.
    The forward functional is max_k (Bhat(k/n) - c_n*k/n); with `reverse`
    the time-flipped form max_k (Bhat(1) - Bhat(k/n) - c_n*(n-k)/n) is
    used instead, which has the same law because the stationary chain is
    reversible.  When sigma_tilde vanishes the path is constant and the
    functional is identically 0.
    """
    d = chain.derive(params)
    if d.sigma_tilde2 == 0.0:
        return np.zeros(trials)
    sig = math.sqrt(d.sigma_tilde2)
    c = drift_rate(params, n)
    root = sig * math.sqrt(n)
    init = chain.InitialDistribution.stationary(params)
    k = np.arange(1, n + 1, dtype=float)
    out = np.empty(trials)
    for start, letters in _letters_batches(params, init, n, seed, trials,
                                           first_stream):
        z = 3.0 - 2.0 * letters.astype(np.float64)
        bhat = (np.cumsum(z, axis=1) - k * d.mu) / root
        if reverse:
            end = bhat[:, -1]
            vals = end[:, None] - bhat - c * (n - k) / n
            block = np.maximum(vals.max(axis=1), end - c)
        else:
            vals = bhat - c * (k / n)
            block = np.maximum(vals.max(axis=1), 0.0)
        out[start:start + block.size] = block
    return out


def drift_rate(params: chain.ChainParams, n: int) -> float:
    """c_n = sqrt(n) * (pi_max - pi_min) / sigma_tilde (inf if the walk is
    deterministic)."""
    d = chain.derive(params)
    gap = abs(d.mu)
    if d.sigma_tilde2 == 0.0:
        return math.inf if gap > 0.0 else 0.0
    return math.sqrt(n) * gap / math.sqrt(d.sigma_tilde2)


@dataclass(frozen=True)
class DriftRow:
    n: int
    drift: float
    exceed_prob: float
    bound: float
    se: float


def run_drift_experiment(params: chain.ChainParams, n_list, z: float,
                         trials: int, seed: int) -> list[DriftRow]:
    """Exceedance probability P(functional > z) for each word length,
    with the matching analytic tail bound at split point eps = 1/sqrt(c_n)
    (clamped into (0, 1])."""
    if params.a == params.b:
        raise ParameterError(
            "drift experiment needs unequal switch rates (a != b)")
    if z <= 0.0:
        raise ParameterError(f"level must be > 0, got {z}")
    if trials < 1:
        raise ParameterError(f"trial count must be >= 1, got {trials}")
    lengths = [int(n) for n in n_list]
    if not lengths or any(n < 1 for n in lengths):
        raise ParameterError(f"word lengths must be >= 1, got {n_list}")
    rows = []
    for i, n in enumerate(lengths):
        c = drift_rate(params, n)
        if math.isfinite(c):
            eps = min(1.0, 1.0 / math.sqrt(c)) if c > 0.0 else 1.0
        else:
            eps = 0.5
        bound = laws.drifted_max_tail_bound(c, z, eps)
        vals = drift_functional_values(params, n, trials, seed,
                                       first_stream=i * trials)
        p = float(np.mean(vals > z))
        rows.append(DriftRow(n=n, drift=c, exceed_prob=p, bound=bound,
                             se=math.sqrt(p * (1.0 - p) / trials)))
    return rows
