"""Limiting laws of the centered, scaled subsequence length.

After centering at n * pi_max and scaling by sqrt(n), the length converges
to one of three limits:

* equal switch rates a = b in (0, 1): sqrt((1-a)/a) times the Brownian
  functional -B(1)/2 + max_{t<=1} B(t), whose density is
  (16/sqrt(2*pi)) * (a/(1-a))^{3/2} * y^2 * exp(-2*a*y^2/(1-a)) on y >= 0;
* unequal rates (or a = b = 0): a centered normal with variance
  a*b*(2-a-b)/(a+b)^3, degenerate at 0 when that vanishes;
* a = b = 1: the point mass at 0.

The Brownian functional also matches half the top eigenvalue of a 2x2
traceless GUE matrix (its square is chi-square with 3 degrees of
freedom), which this module samples directly, with or without an added
diagonal Gaussian perturbation.  A tail bound for the drifted running
maximum max_t (B(t) - c*t) supports the vanishing-fluctuation experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import _kernels, chain, rng
from .errors import ParameterError

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

BROWNIAN_FUNCTIONAL = "brownian-functional"
NORMAL = "normal"
DEGENERATE = "degenerate"


def _maybe_scalar(out: np.ndarray, scalar_in: bool):
    return float(out) if scalar_in else out


def normal_cdf(x):
    """Standard normal CDF via erfc for accurate tails."""
    arr = np.asarray(x, dtype=float)
    return _maybe_scalar(0.5 * special.erfc(-arr / _SQRT2), arr.ndim == 0)


def _normal_tail(x) -> float:
    return 0.5 * special.erfc(x / _SQRT2)


def _check_rate(a: float) -> None:
    if not 0.0 < a < 1.0:
        raise ParameterError(f"equal-rate parameter must lie in (0, 1), got {a}")


def fluctuation_density(y, a: float):
    """Density of the equal-rates limit on y >= 0 (0 on y < 0)."""
    _check_rate(a)
    arr = np.asarray(y, dtype=float)
    c = a / (1.0 - a)
    body = (16.0 / _SQRT_2PI) * c ** 1.5 * arr * arr * np.exp(-2.0 * c * arr * arr)
    return _maybe_scalar(np.where(arr >= 0.0, body, 0.0), arr.ndim == 0)


def _cdf_segment(lo: float, hi: float, a: float, tol: float) -> float:
    val, _ = integrate.quad(lambda t: float(fluctuation_density(t, a)),
                            lo, hi, epsabs=tol, limit=200)
    return val


def fluctuation_cdf(y, a: float, tol: float = 1e-10):
    """CDF of the equal-rates limit by adaptive quadrature of the density.

    Array arguments are integrated segment-wise in sorted order, so a
    large batch costs one pass over the range instead of one integral per
    point.
    """
    _check_rate(a)
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 0:
        yv = float(arr)
        if yv <= 0.0:
            return 0.0
        return min(_cdf_segment(0.0, yv, a, tol), 1.0)
    flat = arr.ravel()
    order = np.argsort(flat, kind="stable")
    out = np.empty_like(flat)
    acc = 0.0
    prev = 0.0
    for idx in order:
        yv = flat[idx]
        if yv <= 0.0:
            out[idx] = 0.0
            continue
        if yv > prev:
            acc += _cdf_segment(prev, yv, a, tol)
            prev = yv
        out[idx] = min(acc, 1.0)
    return out.reshape(arr.shape)


def fluctuation_quantile(q: float, a: float, tol: float = 1e-12) -> float:
    """Inverse of `fluctuation_cdf` in q, by bisection."""
    _check_rate(a)
    if not 0.0 < q < 1.0:
        raise ParameterError(f"quantile level must lie in (0, 1), got {q}")
    lo, hi = 0.0, 1.0
    while fluctuation_cdf(hi, a) < q:
        hi *= 2.0
        if hi > 1e6:
            raise ParameterError(f"quantile level {q} unreachable")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fluctuation_cdf(mid, a) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class LimitLaw:
    """Tagged limit of (LI_n - n*pi_max)/sqrt(n).

    `scale` is set for the brownian-functional kind, `variance` for the
    normal kind; the degenerate kind needs neither.
    """

    kind: str
    a: float
    b: float
    pi_max: float
    scale: float | None = None
    variance: float | None = None

    def centering(self, n: int) -> float:
        return n * self.pi_max

    def scaling(self, n: int) -> float:
        return math.sqrt(n)

    def cdf(self, y):
        arr = np.asarray(y, dtype=float)
        if self.kind == BROWNIAN_FUNCTIONAL:
            return fluctuation_cdf(y, self.a)
        if self.kind == NORMAL and self.variance > 0.0:
            return normal_cdf(arr / math.sqrt(self.variance))
        # point mass at the origin
        return _maybe_scalar((arr >= 0.0).astype(float), arr.ndim == 0)

    def pdf(self, y):
        """Density where one exists; NaN for point-mass laws."""
        arr = np.asarray(y, dtype=float)
        scalar = arr.ndim == 0
        if self.kind == BROWNIAN_FUNCTIONAL:
            return fluctuation_density(y, self.a)
        if self.kind == NORMAL and self.variance > 0.0:
            sd = math.sqrt(self.variance)
            out = np.exp(-0.5 * (arr / sd) ** 2) / (sd * _SQRT_2PI)
            return _maybe_scalar(out, scalar)
        return _maybe_scalar(np.full(arr.shape, np.nan), scalar)


def limiting_law(params: chain.ChainParams) -> LimitLaw:
    """Classify the chain into its limit regime."""
    d = chain.derive(params)
    pi_max = max(d.pi1, d.pi2)
    a, b = params.a, params.b
    if params.is_alternating:
        return LimitLaw(DEGENERATE, a, b, pi_max)
    if a == b and a > 0.0:
        return LimitLaw(BROWNIAN_FUNCTIONAL, a, b, pi_max,
                        scale=math.sqrt((1.0 - a) / a))
    return LimitLaw(NORMAL, a, b, pi_max, variance=d.sigma_tilde2 / 4.0)


def sample_brownian_functional_many(steps: int, count: int, seed: int,
                                    first_stream: int = 0) -> np.ndarray:
    """Draw `count` values of -W(1)/2 + max_{t<=1} W(t) from random walks
    with `steps` Gaussian increments (one counter stream per draw)."""
    if steps < 1:
        raise ParameterError(f"step count must be >= 1, got {steps}")
    if count < 1:
        raise ParameterError(f"draw count must be >= 1, got {count}")
    root = math.sqrt(steps)
    out = np.empty(count)
    batch = max(1, min(count, 8_000_000 // steps))
    pos = 0
    while pos < count:
        size = min(batch, count - pos)
        z = np.empty((size, steps))
        for j in range(size):
            z[j] = rng.stream(seed, first_stream + pos + j).standard_normal(steps)
        end, top = _kernels.path_end_and_max(z)
        out[pos:pos + size] = (top - 0.5 * end) / root
        pos += size
    return out


def sample_brownian_functional(steps: int, seed: int, stream: int = 0) -> float:
    """Single draw of the Brownian functional (see the batched variant)."""
    return float(sample_brownian_functional_many(steps, 1, seed,
                                                 first_stream=stream)[0])


def sample_traceless_max_eigenvalue_many(count: int, seed: int,
                                         first_stream: int = 0) -> np.ndarray:
    """Top eigenvalue sqrt(X^2 + Y^2 + Z^2) of a 2x2 traceless GUE matrix
    [[X, Y+iZ], [Y-iZ, -X]]; each draw uses three normals from its own
    stream, in the order X, Y, Z."""
    if count < 1:
        raise ParameterError(f"draw count must be >= 1, got {count}")
    out = np.empty(count)
    for j in range(count):
        v = rng.stream(seed, first_stream + j).standard_normal(3)
        out[j] = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    return out


def sample_traceless_max_eigenvalue(seed: int, stream: int = 0) -> float:
    return float(sample_traceless_max_eigenvalue_many(1, seed,
                                                      first_stream=stream)[0])


@dataclass(frozen=True)
class GuePerturbation:
    """Mixing weights for a diagonal Gaussian perturbation of strength
    rho in [-1, 1]: the perturbed top eigenvalue is
    sqrt((1+rho)/2) * G + sqrt((1-rho)/2) * L with L the unperturbed one."""

    rho: float

    def __post_init__(self) -> None:
        if not -1.0 <= self.rho <= 1.0:
            raise ParameterError(f"perturbation strength must lie in [-1, 1], got {self.rho}")

    @property
    def gaussian_weight(self) -> float:
        return math.sqrt((1.0 + self.rho) / 2.0)

    @property
    def eigenvalue_weight(self) -> float:
        return math.sqrt((1.0 - self.rho) / 2.0)


def sample_perturbed_max_eigenvalue_many(pert: GuePerturbation, count: int,
                                         seed: int,
                                         first_stream: int = 0) -> np.ndarray:
    """Each draw consumes four normals from its stream in the order
    G, X, Y, Z."""
    if count < 1:
        raise ParameterError(f"draw count must be >= 1, got {count}")
    wg = pert.gaussian_weight
    wl = pert.eigenvalue_weight
    out = np.empty(count)
    for j in range(count):
        v = rng.stream(seed, first_stream + j).standard_normal(4)
        out[j] = wg * v[0] + wl * math.sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3])
    return out


def sample_perturbed_max_eigenvalue(pert: GuePerturbation, seed: int,
                                    stream: int = 0) -> float:
    return float(sample_perturbed_max_eigenvalue_many(pert, 1, seed,
                                                      first_stream=stream)[0])


def gue2_eigenvalue_density(x1, x2):
    """Joint eigenvalue density (1/pi) * (x1-x2)^2 * exp(-(x1^2+x2^2)) of
    the 2x2 GUE (unordered pair)."""
    a1 = np.asarray(x1, dtype=float)
    a2 = np.asarray(x2, dtype=float)
    out = (a1 - a2) ** 2 * np.exp(-(a1 * a1 + a2 * a2)) / math.pi
    return _maybe_scalar(out, a1.ndim == 0 and a2.ndim == 0)


def drifted_max_tail_bound(c: float, z: float, eps: float) -> float:
    """Upper bound on P(max_{t<=1}(B(t) - c*t) > z) for c >= 0, z > 0:

        2*(1 - Phi(z/sqrt(eps))) + 2*(1 - Phi(c*eps + z)),

    valid for any split point eps in (0, 1]."""
    if not c >= 0.0:
        raise ParameterError(f"drift must be >= 0, got {c}")
    if not z > 0.0:
        raise ParameterError(f"level must be > 0, got {z}")
    if not 0.0 < eps <= 1.0:
        raise ParameterError(f"split point must lie in (0, 1], got {eps}")
    return 2.0 * _normal_tail(z / math.sqrt(eps)) + 2.0 * _normal_tail(c * eps + z)
