"""Seedable samplers with exact moment metadata.

Each family carries its exact mean ``mu`` and standard deviation ``sigma``
(``math.inf`` when the variance diverges), an absolute (1+r)-th central
moment ``v_r`` when the variance is infinite, and a set of class tags that
drive which block rules, bounds, and checks apply to it.
"""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaincinv, ndtri

from .errors import ParameterError
from .rng import generator


class ClassTag(enum.Enum):
    FINITE_VARIANCE = "finite_variance"
    FINITE_1PLUS_R_MOMENT = "finite_1plus_r_moment"
    SUB_GAUSSIAN = "sub_gaussian"
    SUB_EXPONENTIAL = "sub_exponential"
    SYMMETRIC = "symmetric"
    FINITE_THIRD_MOMENT = "finite_third_moment"


@dataclass(frozen=True)
class Moments:
    """Exact moment metadata for one distribution spec."""

    mu: float
    sigma: float  # math.inf when the variance diverges
    v_r: "tuple[float, float] | None"  # (r, E|X - mu|^(1+r)) when sigma is infinite
    class_tags: frozenset


@dataclass(frozen=True)
class Gaussian:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ParameterError(f"gaussian needs sigma > 0, got {self.sigma}")

    def label(self) -> str:
        return f"gaussian({self.mu:g}, {self.sigma:g})"

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.mu + self.sigma * rng.standard_normal(count)


@dataclass(frozen=True)
class StudentT:
    nu: float

    def __post_init__(self):
        if not self.nu > 1:
            # nu <= 1 has no finite mean, which every consumer here assumes
            raise ParameterError(f"t needs nu > 1, got {self.nu}")

    def label(self) -> str:
        return f"t({self.nu:g})"

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        # standard normal / chi-square ratio, as implemented by numpy
        return rng.standard_t(self.nu, count)


@dataclass(frozen=True)
class GeneralizedPareto:
    shape: float
    scale: float = 1.0
    loc: float = 0.0

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ParameterError(f"gpd needs scale > 0, got {self.scale}")
        if not self.shape < 1:
            raise ParameterError(f"gpd needs shape < 1 for a finite mean, got {self.shape}")

    def label(self) -> str:
        return f"gpd({self.shape:g}, {self.scale:g}, {self.loc:g})"

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        # inverse survival transform; sf in (0, 1] gives exactly one draw per uniform
        sf = 1.0 - rng.random(count)
        if self.shape == 0.0:
            return self.loc - self.scale * np.log(sf)
        return self.loc + self.scale * np.expm1(-self.shape * np.log(sf)) / self.shape


@dataclass(frozen=True)
class HalfNormal:
    """|Z| for Z standard normal."""

    def label(self) -> str:
        return "halfnormal"

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return np.abs(rng.standard_normal(count))


@dataclass(frozen=True)
class NegativeExponential:
    """-Y for Y exponential with the given rate; support is (-inf, 0]."""

    rate: float = 1.0

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ParameterError(f"negexp needs rate > 0, got {self.rate}")

    def label(self) -> str:
        return f"negexp({self.rate:g})"

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return -rng.standard_exponential(count) / self.rate


@dataclass(frozen=True)
class PointMass:
    value: float = 0.0

    def label(self) -> str:
        return f"pointmass({self.value:g})"

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return np.full(count, float(self.value))


DistributionSpec = (
    Gaussian | StudentT | GeneralizedPareto | HalfNormal | NegativeExponential | PointMass
)


def sample(spec: DistributionSpec, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` i.i.d. values; bit-deterministic given (spec, count, seed)."""
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    return spec._draw(generator(seed), int(count))


def _student_t_abs_moment(nu: float, p: float) -> float:
    # E|T|^p = nu^(p/2) * G((p+1)/2) * G((nu-p)/2) / (sqrt(pi) * G(nu/2)), p < nu
    lg = math.lgamma
    return math.exp(
        0.5 * p * math.log(nu) + lg((p + 1) / 2) + lg((nu - p) / 2) - 0.5 * math.log(math.pi) - lg(nu / 2)
    )


@lru_cache(maxsize=None)
def _gpd_abs_central_moment(shape: float, scale: float, p: float) -> float:
    """E|X - mu|^p for a generalized Pareto with shape in (0,1) and p < 1/shape.

    Substituting y = survival^(-shape) reduces the tail piece to a complete
    Beta function and leaves a bounded smooth integral; integrating in the
    original uniform variable instead loses the slowly-converging tail mass.
    """
    from scipy.integrate import quad
    from scipy.special import beta as beta_fn

    xi = shape
    if not 0.0 < xi < 1.0 or not 0.0 < p < 1.0 / xi:
        raise ParameterError(f"needs 0 < shape < 1 and p < 1/shape, got shape={xi}, p={p}")
    inv = 1.0 / xi
    a = 1.0 / (1.0 - xi)
    tail = float(beta_fn(inv - p, p + 1.0))
    body, _ = quad(lambda t: (1.0 - t) ** p * t ** (-inv - 1.0), 1.0 - xi, 1.0, limit=200)
    return (scale / xi) ** p / xi * a ** (p - inv) * (tail + body)


def moments(spec: DistributionSpec) -> Moments:
    """Exact moments and class tags for a spec."""
    T = ClassTag
    if isinstance(spec, Gaussian):
        tags = {T.FINITE_VARIANCE, T.SUB_GAUSSIAN, T.SUB_EXPONENTIAL, T.SYMMETRIC, T.FINITE_THIRD_MOMENT}
        return Moments(spec.mu, spec.sigma, None, frozenset(tags))
    if isinstance(spec, StudentT):
        nu = spec.nu
        tags = {T.SYMMETRIC}
        if nu > 2:
            sigma, v_r = math.sqrt(nu / (nu - 2)), None
            tags.add(T.FINITE_VARIANCE)
        else:
            sigma = math.inf
            r = 0.9 * (nu - 1)  # any r with 1+r < nu works; stay off the boundary
            v_r = (r, _student_t_abs_moment(nu, 1 + r))
            tags.add(T.FINITE_1PLUS_R_MOMENT)
        if nu > 3:
            tags.add(T.FINITE_THIRD_MOMENT)
        return Moments(0.0, sigma, v_r, frozenset(tags))
    if isinstance(spec, GeneralizedPareto):
        xi, s, loc = spec.shape, spec.scale, spec.loc
        mu = loc + s / (1.0 - xi)
        tags = set()
        if xi < 0.5:
            sigma = s / ((1.0 - xi) * math.sqrt(1.0 - 2.0 * xi))
            v_r = None
            tags.add(T.FINITE_VARIANCE)
        else:
            sigma = math.inf
            r = min(0.9 * (1.0 / xi - 1.0), 0.99)  # needs 1+r < 1/xi
            v_r = (r, _gpd_abs_central_moment(xi, s, 1.0 + r))
            tags.add(T.FINITE_1PLUS_R_MOMENT)
        if xi < 1.0 / 3.0:
            tags.add(T.FINITE_THIRD_MOMENT)
        if xi <= 0:
            tags.update({T.SUB_EXPONENTIAL} if xi == 0 else {T.SUB_EXPONENTIAL, T.SUB_GAUSSIAN})
        return Moments(mu, sigma, v_r, frozenset(tags))
    if isinstance(spec, HalfNormal):
        tags = {T.FINITE_VARIANCE, T.SUB_GAUSSIAN, T.SUB_EXPONENTIAL, T.FINITE_THIRD_MOMENT}
        return Moments(math.sqrt(2.0 / math.pi), math.sqrt(1.0 - 2.0 / math.pi), None, frozenset(tags))
    if isinstance(spec, NegativeExponential):
        tags = {T.FINITE_VARIANCE, T.SUB_EXPONENTIAL, T.FINITE_THIRD_MOMENT}
        return Moments(-1.0 / spec.rate, 1.0 / spec.rate, None, frozenset(tags))
    if isinstance(spec, PointMass):
        tags = {T.FINITE_VARIANCE, T.SUB_GAUSSIAN, T.SUB_EXPONENTIAL, T.SYMMETRIC, T.FINITE_THIRD_MOMENT}
        return Moments(float(spec.value), 0.0, None, frozenset(tags))
    raise ParameterError(f"unknown distribution spec {spec!r}")


def block_mean_quantile_analytic(spec: DistributionSpec, m: int, q: float):
    """Exact quantile of the centered mean of m i.i.d. draws, where closed forms exist.

    Supported for Gaussian (scaled normal quantile) and NegativeExponential
    (gamma quantile, negated and shifted).  Returns None for other families.
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q must be in (0,1), got {q}")
    if isinstance(spec, Gaussian):
        return spec.sigma / math.sqrt(m) * float(ndtri(q))
    if isinstance(spec, NegativeExponential):
        # mean of m draws is -G with G ~ Gamma(m, 1/(m*rate)); center at -1/rate
        return (1.0 - float(gammaincinv(m, 1.0 - q)) / m) / spec.rate
    return None


def draw_quantile(spec: DistributionSpec, p: float):
    """Quantile of a single draw, for families with an analytic inverse CDF."""
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must be in (0,1), got {p}")
    if isinstance(spec, Gaussian):
        return spec.mu + spec.sigma * float(ndtri(p))
    if isinstance(spec, NegativeExponential):
        return math.log(p) / spec.rate
    return None
