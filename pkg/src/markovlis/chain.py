"""Two-state Markov words and the exact moment structure of their walk.

The alphabet is the ordered pair {1, 2}.  A chain is parametrized by the
switch probabilities a = P(next=2 | current=1) and b = P(next=1 |
current=2).  Each word X_1..X_n carries an imbalance walk

    S_k = #{i <= k : X_i = 1} - #{i <= k : X_i = 2},

whose increments Z_i are +1 for letter 1 and -1 for letter 2.  This module
derives the spectral constants of the chain, evolves the one-letter
distribution, samples words reproducibly via counter-based streams, and
evaluates closed forms for E S_k, Cov(Z_k, Z_l), Var S_k, Cov(S_k, S_l)
and the joint law of a letter pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, rng
from .errors import ConsistencyError, DegenerateChainError, ParameterError

# Values this far below 0 (or above 1) are treated as rounding noise and
# clamped; anything worse aborts, since the closed forms cannot produce it.
_PROB_SLACK = 1e-15


@dataclass(frozen=True)
class ChainParams:
    """Switch probabilities of the two-letter chain."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.a <= 1.0 and 0.0 <= self.b <= 1.0):
            raise ParameterError(
                f"switch probabilities must lie in [0, 1], got a={self.a}, b={self.b}")

    @property
    def is_absorbing(self) -> bool:
        """Both letters are fixed points (a = b = 0)."""
        return self.a == 0.0 and self.b == 0.0

    @property
    def is_alternating(self) -> bool:
        """The word alternates deterministically (a = b = 1)."""
        return self.a == 1.0 and self.b == 1.0


@dataclass(frozen=True)
class DerivedParams:
    """Spectral constants: stationary weights pi1/pi2, second eigenvalue
    lambda2 = 1 - a - b, increment mean mu = pi1 - pi2, one-step variance
    sigma2, and the long-run variance rate sigma_tilde2 of the walk."""

    pi1: float
    pi2: float
    lambda2: float
    mu: float
    sigma2: float
    sigma_tilde2: float


def derive(params: ChainParams) -> DerivedParams:
    """Compute the spectral constants.

    At a = b = 0 every distribution is stationary; by convention the mass
    sits on letter 1, so pi_max = 1 and all variances vanish.
    """
    a, b = params.a, params.b
    if params.is_absorbing:
        return DerivedParams(1.0, 0.0, 1.0, 1.0, 0.0, 0.0)
    s = a + b
    pi1 = b / s
    pi2 = a / s
    lambda2 = 1.0 - s
    sigma2 = 4.0 * a * b / (s * s)
    # at a = b = 1 the factor (1 + lambda2) is exactly 0, as required
    sigma_tilde2 = sigma2 * (1.0 + lambda2) / (1.0 - lambda2)
    return DerivedParams(pi1, pi2, lambda2, pi1 - pi2, sigma2, sigma_tilde2)


@dataclass(frozen=True)
class InitialDistribution:
    """Law of the (discarded) seed letter X_0."""

    p1: float
    p2: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ParameterError(
                f"initial probabilities must lie in [0, 1], got ({self.p1}, {self.p2})")
        if abs(self.p1 + self.p2 - 1.0) > 1e-12:
            raise ParameterError(
                f"initial probabilities must sum to 1, got {self.p1 + self.p2!r}")

    @classmethod
    def stationary(cls, params: ChainParams) -> "InitialDistribution":
        d = derive(params)
        return cls(d.pi1, 1.0 - d.pi1)

    @classmethod
    def point(cls, letter: int) -> "InitialDistribution":
        if letter not in (1, 2):
            raise ParameterError(f"point mass must sit on letter 1 or 2, got {letter}")
        return cls(1.0, 0.0) if letter == 1 else cls(0.0, 1.0)

    def beta(self, params: ChainParams) -> float:
        """Signed distance from stationarity: a*p1 - b*p2, zero iff the
        start is stationary (for a + b > 0)."""
        return params.a * self.p1 - params.b * self.p2


class Word:
    """Immutable letter sequence over the ordered alphabet {1, .., m}."""

    __slots__ = ("letters", "m")

    def __init__(self, letters, m: int = 2) -> None:
        if m < 2:
            raise ParameterError(f"alphabet size must be >= 2, got {m}")
        arr = np.array(letters, dtype=np.int64)
        if arr.ndim != 1:
            raise ParameterError("a word is a one-dimensional letter sequence")
        if arr.size and (arr.min() < 1 or arr.max() > m):
            raise ParameterError(f"letters must lie in 1..{m}")
        arr.flags.writeable = False
        object.__setattr__(self, "letters", arr)
        object.__setattr__(self, "m", int(m))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return int(self.letters.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.letters, other.letters)

    def __hash__(self) -> int:
        return hash((self.m, self.letters.tobytes()))

    def __repr__(self) -> str:
        body = ",".join(str(x) for x in self.letters.tolist())
        return f"Word([{body}], m={self.m})"


def _require_mixing(params: ChainParams) -> None:
    if params.is_absorbing:
        raise DegenerateChainError(
            "a + b = 0: both eigenvalues are 1, no spectral decomposition")


def _clamp_probability(x: float, what: str) -> float:
    if x < 0.0:
        if x < -_PROB_SLACK:
            raise ConsistencyError(f"{what} = {x!r} is negative beyond rounding noise")
        return 0.0
    if x > 1.0:
        if x > 1.0 + _PROB_SLACK:
            raise ConsistencyError(f"{what} = {x!r} exceeds 1 beyond rounding noise")
        return 1.0
    return x


def evolve(params: ChainParams, init: InitialDistribution,
           n: int) -> tuple[float, float]:
    """Distribution of X_n: (pi1 + c, pi2 - c) with c = lambda2^n * beta/(a+b)."""
    _require_mixing(params)
    if n < 0:
        raise ParameterError(f"step count must be >= 0, got {n}")
    d = derive(params)
    c = d.lambda2 ** n * init.beta(params) / (params.a + params.b)
    return (_clamp_probability(d.pi1 + c, "evolved p1"),
            _clamp_probability(d.pi2 - c, "evolved p2"))


def sample_letters(params: ChainParams, init: InitialDistribution, n: int,
                   seed: int, streams) -> np.ndarray:
    """Sample one word per stream id, returned as an int8 array of shape
    (len(streams), n).

    Each stream id opens its own counter-based generator keyed by (seed,
    id) and consumes n + 1 uniforms: one for the discarded seed letter
    X_0, then one per transition.  Results therefore depend only on
    (seed, id, n), never on batching or evaluation order.
    """
    if n < 1:
        raise ParameterError(f"word length must be >= 1, got {n}")
    ids = list(streams)
    u0 = np.empty(len(ids))
    u = np.empty((len(ids), n))
    for j, sid in enumerate(ids):
        row = rng.stream(seed, sid).random(n + 1)
        u0[j] = row[0]
        u[j] = row[1:]
    return _kernels.markov_letters(u0, u, params.a, params.b, init.p1)


def sample_word(params: ChainParams, init: InitialDistribution, n: int,
                seed: int, stream: int = 0) -> Word:
    """Sample a single length-n word (see `sample_letters` for the draw
    discipline)."""
    block = sample_letters(params, init, n, seed, [stream])
    return Word(block[0], m=2)


def _check_time(k: int, name: str = "k") -> None:
    if k < 1:
        raise ParameterError(f"time index {name} must be >= 1, got {k}")


def imbalance_mean(params: ChainParams, init: InitialDistribution,
                   k: int) -> float:
    """E S_k from an arbitrary start; reduces to k*mu at stationarity."""
    _require_mixing(params)
    _check_time(k)
    d = derive(params)
    lam = d.lambda2
    beta = init.beta(params)
    correction = 2.0 * beta * lam / (params.a + params.b)
    return d.mu * k + correction * (1.0 - lam ** k) / (1.0 - lam)


def increment_covariance(params: ChainParams, k: int, l: int) -> float:
    """Cov(Z_k, Z_l) = sigma2 * lambda2^(l-k) under the stationary start."""
    _require_mixing(params)
    _check_time(k)
    if l < k:
        raise ParameterError(f"need k <= l, got k={k}, l={l}")
    d = derive(params)
    return d.sigma2 * d.lambda2 ** (l - k)


def imbalance_variance(params: ChainParams, k: int) -> float:
    """Var S_k under the stationary start."""
    _require_mixing(params)
    _check_time(k)
    d = derive(params)
    lam = d.lambda2
    return (d.sigma2 * (1.0 + lam) / (1.0 - lam) * k
            + 2.0 * d.sigma2 * lam * (lam ** k - 1.0) / (1.0 - lam) ** 2)


def imbalance_covariance(params: ChainParams, k: int, l: int) -> float:
    """Cov(S_k, S_l) under the stationary start, for k <= l."""
    _require_mixing(params)
    _check_time(k)
    if l < k:
        raise ParameterError(f"need k <= l, got k={k}, l={l}")
    d = derive(params)
    lam = d.lambda2
    return d.sigma2 * ((1.0 + lam) / (1.0 - lam) * k
                       - lam * (1.0 - lam ** k) * (1.0 + lam ** (l - k))
                       / (1.0 - lam) ** 2)


def pair_probabilities(params: ChainParams, init: InitialDistribution,
                       k: int, l: int) -> tuple[float, float, float, float]:
    """Joint law of (X_k, X_l) for 1 <= k < l, as (p11, p12, p21, p22).

    Marginal at time k times the (l-k)-step conditional law.  The
    conditional started from letter 1 has beta = a, from letter 2 it has
    beta = -b.
    """
    _require_mixing(params)
    _check_time(k)
    if l <= k:
        raise ParameterError(f"need k < l, got k={k}, l={l}")
    d = derive(params)
    s = params.a + params.b
    pk1, pk2 = evolve(params, init, k)
    gap = d.lambda2 ** (l - k)
    from1_1 = _clamp_probability(d.pi1 + gap * params.a / s, "conditional p(1|1)")
    from1_2 = _clamp_probability(d.pi2 - gap * params.a / s, "conditional p(2|1)")
    from2_1 = _clamp_probability(d.pi1 - gap * params.b / s, "conditional p(1|2)")
    from2_2 = _clamp_probability(d.pi2 + gap * params.b / s, "conditional p(2|2)")
    return (pk1 * from1_1, pk1 * from1_2, pk2 * from2_1, pk2 * from2_2)
