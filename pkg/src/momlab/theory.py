"""Block-count rules and closed-form error-bound evaluators.

Block rules map (n, alpha, delta) to a number of blocks k and check the
explicit hypotheses of the theorem they come from; bound evaluators compute
the corresponding error bounds with their explicit constants.
"""

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import HypothesisError, ParameterError

# guards against float round-off right at integer boundaries, e.g. 3*0.01*1e6
_EPS = 1e-9


def _ceil(x: float) -> int:
    return int(math.ceil(x - _EPS))


class BlockCount(NamedTuple):
    k: int
    clamped: bool  # True when the raw formula value fell outside [1, n]


@dataclass(frozen=True)
class HeavyTailBlocks:
    """k = max{ceil(log(2/delta)/(1/2-1/gamma)^2), ceil(gamma*alpha*n)}.

    Valid for any gamma > 2; the finite-variance bound constant additionally
    requires gamma <= 2.5 (see bound_finite_variance).
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma > 2:
            raise ParameterError(f"heavy_tail needs gamma > 2, got {self.gamma}")

    def label(self) -> str:
        return f"heavy_tail({self.gamma:g})"

    def _k(self, n: int, alpha: float, delta: float) -> int:
        c = (0.5 - 1.0 / self.gamma) ** 2
        if alpha > 0.4:
            raise HypothesisError("Theorem 3.2 requires alpha <= 0.4")
        if not delta > 2.0 * math.exp(-c * n):
            raise HypothesisError("Theorem 3.2 requires delta > 2*exp(-(1/2-1/gamma)^2*n)")
        return max(_ceil(math.log(2.0 / delta) / c), _ceil(self.gamma * alpha * n))


@dataclass(frozen=True)
class PowerLawBlocks:
    """k = ceil(xi * alpha^exponent * n).

    exponent 2/3 is the sub-exponential rule and 2/(s+1) the matched-moment
    sub-Gaussian rule; other exponents are free choices for floor studies and
    carry no theorem guarantee, so no delta-range hypothesis is enforced here.
    """

    xi: float
    exponent: float

    def __post_init__(self):
        if not self.xi > 0:
            raise ParameterError(f"power_law needs xi > 0, got {self.xi}")
        if not 0.0 < self.exponent <= 1.0:
            raise ParameterError(f"power_law needs exponent in (0,1], got {self.exponent}")

    def label(self) -> str:
        return f"power_law({self.xi:g}, {self.exponent:g})"

    def _k(self, n: int, alpha: float, delta: float) -> int:
        return _ceil(self.xi * alpha**self.exponent * n)


@dataclass(frozen=True)
class FractionBlocks:
    """k = ceil(beta * n)."""

    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ParameterError(f"fraction needs beta in (0,1], got {self.beta}")

    def label(self) -> str:
        return f"fraction({self.beta:g})"

    def _k(self, n: int, alpha: float, delta: float) -> int:
        return _ceil(self.beta * n)


BlockRule = HeavyTailBlocks | PowerLawBlocks | FractionBlocks


def resolve_blocks(rule: BlockRule, n: int, alpha: float, delta: float) -> BlockCount:
    """Evaluate a block rule, clamping to [1, n] and reporting the clamp."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= alpha < 0.5:
        raise ParameterError(f"alpha must be in [0, 0.5), got {alpha}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must be in (0,1), got {delta}")
    raw = rule._k(n, alpha, delta)
    k = min(max(raw, 1), n)
    return BlockCount(k=k, clamped=k != raw)


@dataclass(frozen=True)
class BoundValue:
    value: float
    constant_used: float
    regime: str  # "iid_term_dominant" | "bias_term_dominant"


def finite_variance_constant(gamma: float) -> float:
    """C(gamma) = 2*sqrt(2+sqrt(2)) * ((1/2-1/gamma)^(-3/2) + sqrt(gamma)*(1/2-1/gamma)^(-1/2))."""
    g = 0.5 - 1.0 / gamma
    return 2.0 * math.sqrt(2.0 + math.sqrt(2.0)) * (g**-1.5 + math.sqrt(gamma) * g**-0.5)


def _check_heavy_tail_hypotheses(n: int, alpha: float, delta: float, gamma: float, theorem: str):
    if not 2.0 < gamma <= 2.5:
        raise HypothesisError(f"Theorem {theorem} requires gamma in (2, 2.5]")
    if not 0.0 <= alpha <= 0.4:
        raise HypothesisError(f"Theorem {theorem} requires alpha <= 0.4")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must be in (0,1), got {delta}")
    if not delta > 2.0 * math.exp(-((0.5 - 1.0 / gamma) ** 2) * n):
        raise HypothesisError(f"Theorem {theorem} requires delta > 2*exp(-(1/2-1/gamma)^2*n)")


def bound_finite_variance(n: int, alpha: float, delta: float, gamma: float, sigma: float) -> BoundValue:
    """C(gamma) * sigma * (sqrt(log(2/delta)/n) + sqrt(alpha))."""
    _check_heavy_tail_hypotheses(n, alpha, delta, gamma, "3.2")
    if not (sigma >= 0 and math.isfinite(sigma)):
        raise ParameterError(f"sigma must be finite and >= 0, got {sigma}")
    c = finite_variance_constant(gamma)
    iid = math.sqrt(math.log(2.0 / delta) / n)
    bias = math.sqrt(alpha)
    regime = "iid_term_dominant" if iid >= bias else "bias_term_dominant"
    return BoundValue(value=c * sigma * (iid + bias), constant_used=c, regime=regime)


def bound_infinite_variance(
    n: int,
    alpha: float,
    delta: float,
    gamma: float,
    v_r: float,
    r: float,
    constant_override: "float | None" = None,
) -> BoundValue:
    """C * v_r^(1/(1+r)) * ((log(2/delta)/n)^(r/(1+r)) + alpha^(r/(1+r))).

    Only the order of the constant is pinned down, C ~ (1/2-1/gamma)^(-(2r+1)/(1+r));
    the default uses a unit prefactor on that order, overridable by the caller.
    """
    if not 0.0 < r < 1.0:
        raise ParameterError(f"r must be in (0,1), got {r}")
    if not v_r > 0:
        raise ParameterError(f"v_r must be > 0, got {v_r}")
    _check_heavy_tail_hypotheses(n, alpha, delta, gamma, "3.3")
    if constant_override is not None:
        if not constant_override > 0:
            raise ParameterError(f"constant_override must be > 0, got {constant_override}")
        c = constant_override
    else:
        c = (0.5 - 1.0 / gamma) ** (-(2.0 * r + 1.0) / (1.0 + r))
    e = r / (1.0 + r)
    iid = (math.log(2.0 / delta) / n) ** e
    bias = alpha**e
    regime = "iid_term_dominant" if iid >= bias else "bias_term_dominant"
    return BoundValue(value=c * v_r ** (1.0 / (1.0 + r)) * (iid + bias), constant_used=c, regime=regime)


def bound_general_quantile(
    q_m: Callable[[float], float], k: int, m: int, alpha: float, delta: float
) -> float:
    """max{Q_m(1/2 + s + alpha*m), -Q_m(1/2 - s - alpha*m)} with s = sqrt(log(2/delta)/(2k)).

    ``q_m`` is any quantile accessor for the centered block mean of size m
    (analytic or Monte Carlo).
    """
    if k < 1 or m < 1:
        raise ParameterError(f"k and m must be >= 1, got k={k}, m={m}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must be in (0,1), got {delta}")
    s = math.sqrt(math.log(2.0 / delta) / (2.0 * k))
    eps = s + alpha * m
    if not eps < 0.5:
        raise HypothesisError(
            "Theorem 3.1 requires sqrt(log(2/delta)/(2k)) + alpha*m < 1/2"
            f" (got {eps:.4f})"
        )
    return max(q_m(0.5 + eps), -q_m(0.5 - eps))


# asymptotic-bias exponent of the median-of-means per distribution class
def asymptotic_bias_order(class_tag, r: "float | None" = None, s: "int | None" = None) -> float:
    """Exponent e such that the error floor scales as alpha^e for the class.

    finite variance -> 1/2; finite (1+r)-th moment -> r/(1+r); sub-exponential
    -> 2/3; sub-Gaussian with s matched moments -> s/(s+1); symmetric -> 1.
    """
    from .distributions import ClassTag

    if class_tag is ClassTag.FINITE_VARIANCE:
        return 0.5
    if class_tag is ClassTag.FINITE_1PLUS_R_MOMENT:
        if r is None or not 0.0 < r < 1.0:
            raise ParameterError(f"needs r in (0,1), got {r}")
        return r / (1.0 + r)
    if class_tag is ClassTag.SUB_EXPONENTIAL:
        return 2.0 / 3.0
    if class_tag is ClassTag.SUB_GAUSSIAN:
        if s is None or s < 3:
            raise ParameterError(f"sub-Gaussian order needs integer s >= 3, got {s}")
        return s / (s + 1.0)
    if class_tag is ClassTag.SYMMETRIC:
        return 1.0
    raise ParameterError(f"no asymptotic-bias order for class {class_tag!r}")
