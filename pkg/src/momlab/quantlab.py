"""Monte Carlo oracles for block-mean quantiles, order-statistic coverage,
normal-approximation gaps, and contaminated-block counts.

All estimators here are seeded and chunked with per-chunk substreams, so the
results are bit-stable regardless of chunk scheduling.  Quantiles use the
type-1 (inverse CDF) convention: the ceil(q*reps)-th order statistic, no
interpolation.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .contamination import replaced_count
from .distributions import ClassTag, DistributionSpec, draw_quantile, moments, sample
from .errors import ParameterError
from .rng import derive_seed, generator

# fixed chunking policy (values per chunk) so results never depend on memory
_CHUNK_VALUES = 1 << 22


def order_statistic(sample_values, r: int) -> float:
    """r-th smallest value (1-based), by selection rather than a full sort."""
    x = np.asarray(sample_values, dtype=float)
    if not 1 <= r <= x.size:
        raise ParameterError(f"r must be in [1, {x.size}], got {r}")
    return float(np.partition(x, r - 1)[r - 1])


def _type1_index(q: float, reps: int) -> int:
    """ceil(q*reps) clamped to [1, reps], robust to float round-off."""
    return max(1, min(reps, int(math.ceil(q * reps - 1e-9))))


def _block_mean_draws(spec: DistributionSpec, m: int, reps: int, seed: int, tag: str) -> np.ndarray:
    """reps independent realizations of (mean of m i.i.d. draws) - mu."""
    mu = moments(spec).mu
    out = np.empty(reps)
    chunk_reps = max(1, _CHUNK_VALUES // m)
    pos = chunk_index = 0
    while pos < reps:
        r = min(chunk_reps, reps - pos)
        draws = sample(spec, r * m, derive_seed(seed, tag, chunk_index))
        out[pos : pos + r] = draws.reshape(r, m).mean(axis=1) - mu
        pos += r
        chunk_index += 1
    return out


def empirical_block_mean_quantile(
    spec: DistributionSpec, m: int, q: float, reps: int, seed: int
) -> float:
    """Monte Carlo quantile of the centered block mean of size m."""
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q must be in (0,1), got {q}")
    if reps < 100:
        raise ParameterError(f"reps must be >= 100, got {reps}")
    b = _block_mean_draws(spec, m, reps, seed, "block_mean_quantile")
    return order_statistic(b, _type1_index(q, reps))


def _quantile_se(sorted_values: np.ndarray, q: float) -> float:
    """1-sigma order-statistic bracket for the empirical q-quantile."""
    reps = sorted_values.size
    half = math.sqrt(q * (1.0 - q) / reps)
    lo = sorted_values[_type1_index(q - half, reps) - 1]
    hi = sorted_values[_type1_index(q + half, reps) - 1]
    return 0.5 * float(hi - lo)


@dataclass(frozen=True)
class QuantileCurve:
    m: int
    qs: tuple
    values: tuple
    reps: int
    se: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.qs, self.qs[1:])):
            raise ParameterError("qs must be strictly increasing")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ParameterError("quantile values must be nondecreasing in q")


def quantile_curve(spec: DistributionSpec, m: int, qs, reps: int, seed: int) -> QuantileCurve:
    """Evaluate several quantiles of the centered block mean off one batch of draws."""
    qs = tuple(float(q) for q in qs)
    if any(not 0.0 < q < 1.0 for q in qs):
        raise ParameterError("all qs must be in (0,1)")
    if reps < 100:
        raise ParameterError(f"reps must be >= 100, got {reps}")
    b = np.sort(_block_mean_draws(spec, m, reps, seed, "block_mean_quantile"))
    values = tuple(float(b[_type1_index(q, reps) - 1]) for q in qs)
    se = tuple(_quantile_se(b, q) for q in qs)
    return QuantileCurve(m=m, qs=qs, values=values, reps=reps, se=se)


@dataclass(frozen=True)
class CoverageResult:
    upper: float  # fraction of runs with X_(r) <= Q(eps + sqrt(log(1/delta)/2n))
    lower: float  # fraction of runs with X_(r) >= Q(eps - sqrt(log(1/delta)/2n))
    reps: int


def order_statistic_coverage(
    spec: DistributionSpec, n: int, r: int, delta: float, reps: int, seed: int
) -> CoverageResult:
    """Coverage of the quantile sandwich for the r-th order statistic of n draws."""
    grid = order_statistic_coverage_grid(spec, n, [r], [delta], reps, seed)
    return grid[(r, delta)]


def order_statistic_coverage_grid(
    spec: DistributionSpec, n: int, rs, deltas, reps: int, seed: int
) -> dict:
    """Coverage for every (r, delta) pair, sharing one set of simulated samples."""
    if n < 1 or reps < 1:
        raise ParameterError(f"n and reps must be >= 1, got n={n}, reps={reps}")
    rs = [int(r) for r in rs]
    deltas = [float(d) for d in deltas]
    thresholds = {}
    for r in rs:
        if not 1 <= r <= n:
            raise ParameterError(f"r must be in [1, {n}], got {r}")
        eps = r / n
        for delta in deltas:
            if not 0.0 < delta < 1.0:
                raise ParameterError(f"delta must be in (0,1), got {delta}")
            half = math.sqrt(math.log(1.0 / delta) / (2.0 * n))
            if not (0.0 < eps + half < 1.0 and 0.0 < eps - half < 1.0):
                raise ParameterError(
                    f"quantile arguments eps +/- sqrt(log(1/delta)/2n) must lie in (0,1)"
                    f" for r={r}, delta={delta}"
                )
            hi = draw_quantile(spec, eps + half)
            lo = draw_quantile(spec, eps - half)
            if hi is None or lo is None:
                raise ParameterError(f"no analytic quantile for {spec!r}")
            thresholds[(r, delta)] = (lo, hi)

    kth = sorted({r - 1 for r in rs})
    up_hits = {key: 0 for key in thresholds}
    low_hits = {key: 0 for key in thresholds}
    chunk_rows = max(1, _CHUNK_VALUES // n)
    pos = chunk_index = 0
    while pos < reps:
        rows = min(chunk_rows, reps - pos)
        draws = sample(spec, rows * n, derive_seed(seed, "order_stat_coverage", chunk_index))
        block = np.partition(draws.reshape(rows, n), kth, axis=1)
        for (r, delta), (lo, hi) in thresholds.items():
            col = block[:, r - 1]
            up_hits[(r, delta)] += int(np.count_nonzero(col <= hi))
            low_hits[(r, delta)] += int(np.count_nonzero(col >= lo))
        pos += rows
        chunk_index += 1
    return {
        key: CoverageResult(upper=up_hits[key] / reps, lower=low_hits[key] / reps, reps=reps)
        for key in thresholds
    }


@dataclass(frozen=True)
class NormalApproxGap:
    m: int
    g_hat: float  # in [0, 1]
    reps: int


def normal_approx_gap(spec: DistributionSpec, m: int, reps: int, seed: int) -> NormalApproxGap:
    """Kolmogorov-Smirnov distance between standardized block means and N(0,1)."""
    mom = moments(spec)
    if not (math.isfinite(mom.sigma) and mom.sigma > 0):
        raise ParameterError(f"needs a positive finite sigma, got {mom.sigma}")
    if reps < 10**4:
        raise ParameterError(f"reps must be >= 1e4, got {reps}")
    z = np.sort(_block_mean_draws(spec, m, reps, seed, "normal_gap") * math.sqrt(m) / mom.sigma)
    phi = ndtr(z)
    steps = np.arange(1, reps + 1) / reps
    d = max(float(np.max(steps - phi)), float(np.max(phi - (steps - 1.0 / reps))))
    return NormalApproxGap(m=m, g_hat=d, reps=reps)


@dataclass(frozen=True)
class BlockHitStats:
    """Counts of contaminated blocks among the lower-half blocks, per replication."""

    zs: np.ndarray
    n: int
    k: int
    alpha: float

    @property
    def mean_z(self) -> float:
        return float(np.mean(self.zs))

    def tail_prob(self, threshold: float) -> float:
        return float(np.mean(self.zs > threshold))


def contaminated_block_count(
    n: int,
    k: int,
    alpha: float,
    reps: int,
    seed: int,
    spec: "DistributionSpec | None" = None,
) -> BlockHitStats:
    """Simulate how many of the ceil(k/2) lowest-mean blocks get contaminated.

    With ``spec=None`` the simulation is distribution-free: contaminated
    indices are uniform and independent of values, so any fixed half of the
    blocks is representative.  Passing a spec ranks actual simulated block
    means instead (the value-aware variant).
    """
    if not 1 <= k <= n:
        raise ParameterError(f"k must be in [1, {n}], got {k}")
    if not 0.0 <= alpha < 0.5:
        raise ParameterError(f"alpha must be in [0, 0.5), got {alpha}")
    if reps < 1:
        raise ParameterError(f"reps must be >= 1, got {reps}")
    t = replaced_count(alpha, n)
    m = n // k
    low = (k + 1) // 2
    zs = np.zeros(reps, dtype=np.int64)
    if t == 0:
        return BlockHitStats(zs=zs, n=n, k=k, alpha=alpha)
    for i in range(reps):
        rng = generator(derive_seed(seed, "block_hits", i))
        idx = rng.choice(n, size=t, replace=False)
        if spec is None:
            hit_blocks = np.unique(idx[idx < low * m] // m)
            zs[i] = hit_blocks.size
        else:
            draws = sample(spec, n, derive_seed(seed, "block_hits_draw", i))
            means = draws[: k * m].reshape(k, m).mean(axis=1)
            lowest = np.argpartition(means, low - 1)[:low]
            hit_blocks = np.unique(idx[idx < k * m] // m)
            zs[i] = int(np.isin(hit_blocks, lowest).sum())
    return BlockHitStats(zs=zs, n=n, k=k, alpha=alpha)


@dataclass(frozen=True)
class SymmetricClassResult:
    passed: bool
    worst_ratio: float  # max over the grid of Q_hat * sqrt(m) / (sigma * eps)
    rows: tuple  # (m, eps, q_hat, linear_bound, se, ok) per grid point


def symmetric_class_check(
    spec: DistributionSpec,
    epsilon_0: float,
    c: float,
    m_grid,
    eps_grid,
    reps: int,
    seed: int,
) -> SymmetricClassResult:
    """Check Q_m(1/2+eps) <= c*sigma*eps/sqrt(m) + 3*SE over the given grid."""
    mom = moments(spec)
    if ClassTag.SYMMETRIC not in mom.class_tags:
        raise ParameterError(f"{spec.label()} is not tagged symmetric")
    if not (math.isfinite(mom.sigma) and mom.sigma > 0):
        raise ParameterError(f"needs a positive finite sigma, got {mom.sigma}")
    if not 0.0 < epsilon_0 < 1.0 / 3.0:
        raise ParameterError(f"epsilon_0 must be in (0, 1/3), got {epsilon_0}")
    if not c > 5.0:
        raise ParameterError(f"c must be > 5, got {c}")
    eps_grid = tuple(float(e) for e in eps_grid)
    if any(not 0.0 <= e <= epsilon_0 for e in eps_grid):
        raise ParameterError(f"eps_grid must lie in [0, {epsilon_0}]")
    if reps < 100:
        raise ParameterError(f"reps must be >= 100, got {reps}")
    rows = []
    worst = -math.inf
    passed = True
    for m in m_grid:
        b = np.sort(_block_mean_draws(spec, int(m), reps, seed, f"sym_class_m{m}"))
        for eps in eps_grid:
            q_hat = float(b[_type1_index(0.5 + eps, reps) - 1])
            bound = c * mom.sigma * eps / math.sqrt(m)
            se = _quantile_se(b, 0.5 + eps)
            ok = q_hat <= bound + 3.0 * se
            passed = passed and ok
            if eps > 0:
                worst = max(worst, q_hat * math.sqrt(m) / (mom.sigma * eps))
            rows.append((int(m), eps, q_hat, bound, se, ok))
    return SymmetricClassResult(passed=passed, worst_ratio=worst, rows=tuple(rows))
