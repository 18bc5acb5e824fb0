"""Seeded replication harness: error-quantile sweeps over a contamination
grid, log-log slope fits, and the figure presets.

Per replication index i, the sample draw, the attack stream, and the
partition stream are derived as f(master_seed, tag, i) with tags "draw",
"attack", and "part".  None of them depends on alpha or on the estimator, so
one replication shares its clean sample across the whole grid and the sweep
output is bit-identical to running each grid point independently.
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .contamination import AttackKind, AttackSpec, apply_attack
from .distributions import (
    DistributionSpec,
    GeneralizedPareto,
    HalfNormal,
    StudentT,
    moments,
    sample,
)
from .errors import ParameterError
from .estimators import (
    CatoniEstimator,
    EstimatorSpec,
    MedianOfMeans,
    SampleMean,
    SampleMedian,
    TrimmedMean,
    _block_median,
    catoni,
    sample_mean,
    sample_median,
    trimmed_mean,
)
from .rng import derive_seed, generator
from .theory import FractionBlocks, HeavyTailBlocks, PowerLawBlocks, resolve_blocks

DEFAULT_MASTER_SEED = 20250601

RESULTS_COLUMNS = [
    "label", "estimator", "attack", "alpha", "n", "k", "delta",
    "n_rep", "error_q", "error_median", "master_seed",
]
SLOPE_COLUMNS = [
    "label", "estimator", "alpha_lo", "alpha_hi", "slope", "intercept", "r_squared", "points",
]


@dataclass(frozen=True)
class ExperimentPlan:
    dist: DistributionSpec
    estimators: tuple
    attack: AttackSpec  # template; its alpha field is replaced per grid point
    alpha_grid: tuple
    n: int
    delta: float
    n_rep: int
    master_seed: int
    label: str
    reference_slope: "float | None" = None

    def __post_init__(self):
        if self.n < 1 or self.n_rep < 1:
            raise ParameterError(f"n and n_rep must be >= 1, got n={self.n}, n_rep={self.n_rep}")
        if not 0.0 < self.delta < 1.0:
            raise ParameterError(f"delta must be in (0,1), got {self.delta}")
        if not self.estimators:
            raise ParameterError("plan needs at least one estimator")
        grid = self.alpha_grid
        if not grid or any(not 0.0 < a < 0.5 for a in grid):
            raise ParameterError("alpha_grid values must lie in (0, 0.5)")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ParameterError("alpha_grid must be strictly increasing")
        # fail fast when some grid point violates an estimator's rule hypotheses
        for est in self.estimators:
            if isinstance(est, MedianOfMeans):
                for alpha in grid:
                    resolve_blocks(est.rule, self.n, alpha, self.delta)


@dataclass(frozen=True)
class ErrorQuantileRecord:
    alpha: float
    estimator: str
    k: int  # resolved block count; 0 for estimators without blocks
    error_q: float
    error_median: float
    n_rep: int
    seed: int


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float
    alpha_window: tuple
    points_used: int


def _auto_trim_epsilon(alpha: float, n: int, delta: float) -> float:
    return alpha + math.sqrt(math.log(4.0 / delta) / (2.0 * n))


def _catoni_scale(dist_moments) -> float:
    if math.isfinite(dist_moments.sigma) and dist_moments.sigma > 0:
        return dist_moments.sigma
    r, value = dist_moments.v_r
    return value ** (1.0 / (1.0 + r))


def _evaluate(est, contaminated, permuted, alpha, n, delta, dist_moments, part_seed):
    if isinstance(est, MedianOfMeans):
        k = resolve_blocks(est.rule, n, alpha, delta).k
        if est.partition == "shuffled":
            return _block_median(permuted, k)
        return _block_median(np.ascontiguousarray(contaminated), k)
    if isinstance(est, TrimmedMean):
        eps = est.epsilon if est.epsilon is not None else _auto_trim_epsilon(alpha, n, delta)
        return trimmed_mean(contaminated, eps)
    if isinstance(est, CatoniEstimator):
        scale = est.scale_guess if est.scale_guess is not None else _catoni_scale(dist_moments)
        return catoni(contaminated, scale, est.delta if est.delta is not None else delta)
    if isinstance(est, SampleMean):
        return sample_mean(contaminated)
    if isinstance(est, SampleMedian):
        return sample_median(contaminated)
    raise ParameterError(f"unknown estimator spec {est!r}")


def _replication_errors(dist, estimators, attack, alphas, n, delta, rep_index, master_seed):
    """|estimate - mu| for one replication, for every (alpha, estimator) pair."""
    draw_seed = derive_seed(master_seed, "draw", rep_index)
    attack_seed = derive_seed(master_seed, "attack", rep_index)
    part_seed = derive_seed(master_seed, "part", rep_index)
    clean = sample(dist, n, draw_seed)
    dist_moments = moments(dist)
    needs_perm = any(
        isinstance(e, MedianOfMeans) and e.partition == "shuffled" for e in estimators
    )
    perm = generator(part_seed).permutation(n) if needs_perm else None
    errors = np.empty((len(alphas), len(estimators)))
    for a_idx, alpha in enumerate(alphas):
        contaminated, _ = apply_attack(replace(attack, alpha=alpha), clean, attack_seed)
        permuted = contaminated[perm] if needs_perm else None
        for e_idx, est in enumerate(estimators):
            value = _evaluate(est, contaminated, permuted, alpha, n, delta, dist_moments, part_seed)
            errors[a_idx, e_idx] = abs(value - dist_moments.mu)
    return errors


def run_replication(
    dist, estimator, attack, alpha, n, replication_index, master_seed, *, delta=0.05
):
    """Single estimation error for one (alpha, replication) point."""
    if not 0.0 <= alpha < 0.5:
        raise ParameterError(f"alpha must be in [0, 0.5), got {alpha}")
    errors = _replication_errors(
        dist, (estimator,), attack, (alpha,), n, delta, replication_index, master_seed
    )
    return float(errors[0, 0])


def replication_error_matrix(
    dist, estimators, attack, alphas, n, delta, n_rep, master_seed, threads=1
):
    """(n_rep, n_alpha, n_est) error matrix; output independent of ``threads``."""
    estimators = tuple(estimators)
    alphas = tuple(alphas)
    errors = np.empty((n_rep, len(alphas), len(estimators)))

    def work(i):
        errors[i] = _replication_errors(dist, estimators, attack, alphas, n, delta, i, master_seed)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(n_rep)))
    else:
        for i in range(n_rep):
            work(i)
    return errors


def _type1(sorted_errors: np.ndarray, q: float) -> float:
    n = sorted_errors.size
    idx = max(1, min(n, int(math.ceil(q * n - 1e-9))))
    return float(sorted_errors[idx - 1])


def run_sweep(plan: ExperimentPlan, threads: int = 1):
    """Error-quantile records for every (alpha, estimator) pair of the plan."""
    errors = replication_error_matrix(
        plan.dist, plan.estimators, plan.attack, plan.alpha_grid,
        plan.n, plan.delta, plan.n_rep, plan.master_seed, threads,
    )
    records = []
    for e_idx, est in enumerate(plan.estimators):
        for a_idx, alpha in enumerate(plan.alpha_grid):
            errs = np.sort(errors[:, a_idx, e_idx])
            k = 0
            if isinstance(est, MedianOfMeans):
                k = resolve_blocks(est.rule, plan.n, alpha, plan.delta).k
            records.append(
                ErrorQuantileRecord(
                    alpha=float(alpha),
                    estimator=est.label(),
                    k=k,
                    error_q=_type1(errs, 1.0 - plan.delta),
                    error_median=_type1(errs, 0.5),
                    n_rep=plan.n_rep,
                    seed=plan.master_seed,
                )
            )
    records.sort(key=lambda rec: (rec.estimator, rec.alpha))
    return records


def fit_slope(records, alpha_window, field: str = "error_q") -> SlopeFit:
    """OLS slope of log(value) on log(alpha) over the window, for one estimator."""
    lo, hi = float(alpha_window[0]), float(alpha_window[1])
    labels = {rec.estimator for rec in records}
    if len(labels) > 1:
        raise ParameterError(f"records mix estimators: {sorted(labels)}")
    pts = [
        (rec.alpha, getattr(rec, field))
        for rec in records
        if lo - 1e-12 <= rec.alpha <= hi + 1e-12 and getattr(rec, field) > 0.0
    ]
    if len(pts) < 3:
        raise ParameterError(f"need >= 3 usable points in [{lo}, {hi}], found {len(pts)}")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    intercept = float(y.mean() - slope * x.mean())
    ss_res = float(np.sum((y - (intercept + slope * x)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return SlopeFit(
        slope=slope, intercept=intercept, r_squared=r_squared,
        alpha_window=(lo, hi), points_used=len(pts),
    )


def log_grid(lo: float, hi: float, num: int = 12) -> tuple:
    return tuple(float(a) for a in np.logspace(math.log10(lo), math.log10(hi), num))

# grid spanning the contamination range the error-quantile curves are read on
GRID_MAIN = log_grid(1e-3, 5e-2, 12)
# narrower grid for the block-exponent floor study: above 1e-2 the xi=4 rules
# degenerate to single-sample blocks, which turns curves into step functions
GRID_FLOOR = log_grid(1e-3, 1e-2, 12)

FIGURE_IDS = ("1a", "1b", "1c", "4")
FLOOR_EXPONENTS = (2 / 3 - 0.2, 2 / 3 - 0.1, 2 / 3, 2 / 3 + 0.15, 2 / 3 + 0.3)


def _baselines():
    return (TrimmedMean(), CatoniEstimator())


def figure_preset(fig_id: str, scale: float = 1.0, master_seed: int = DEFAULT_MASTER_SEED):
    """Experiment plan(s) reproducing a figure, with n scaled by ``scale``."""
    if not 0.0 < scale <= 1.0:
        raise ParameterError(f"scale must be in (0,1], got {scale}")
    attack = AttackSpec(AttackKind.LARGEST_REPLACEMENT, alpha=0.0)
    if fig_id == "1a":
        return ExperimentPlan(
            dist=GeneralizedPareto(0.45, 1.0, 0.0),
            estimators=(MedianOfMeans(HeavyTailBlocks(3.0)),) + _baselines(),
            attack=attack, alpha_grid=GRID_MAIN, n=round(1e6 * scale),
            delta=0.05, n_rep=100, master_seed=master_seed,
            label="1a", reference_slope=0.5,
        )
    if fig_id == "1b":
        return ExperimentPlan(
            dist=GeneralizedPareto(0.75, 1.0, 0.0),
            estimators=(MedianOfMeans(HeavyTailBlocks(3.0)),) + _baselines(),
            attack=attack, alpha_grid=GRID_MAIN, n=round(1e6 * scale),
            delta=0.05, n_rep=100, master_seed=master_seed,
            label="1b", reference_slope=0.25,
        )
    if fig_id == "1c":
        return ExperimentPlan(
            dist=StudentT(3.0),
            estimators=(MedianOfMeans(FractionBlocks(0.2)),) + _baselines(),
            attack=attack, alpha_grid=GRID_MAIN, n=round(1e7 * scale),
            delta=0.05, n_rep=100, master_seed=master_seed,
            label="1c", reference_slope=1.0,
        )
    if fig_id == "4":
        # the floor study uses the lower-bound construction: random indices
        # pushed far out, signed against the half-normal's median bias
        floor_attack = AttackSpec(AttackKind.ARBITRARY_LARGE, alpha=0.0, magnitude=1e9, sign=-1)
        plans = []
        for exponent in FLOOR_EXPONENTS:
            plans.append(
                ExperimentPlan(
                    dist=HalfNormal(),
                    estimators=(MedianOfMeans(PowerLawBlocks(4.0, exponent)),),
                    attack=floor_attack, alpha_grid=GRID_FLOOR, n=round(1e7 * scale),
                    delta=0.05, n_rep=100, master_seed=master_seed,
                    label=f"4[i={exponent:.4g}]", reference_slope=2 / 3,
                )
            )
        return plans
    raise ParameterError(f"unknown figure id {fig_id!r}; expected one of {FIGURE_IDS}")


def results_rows(plan: ExperimentPlan, records) -> list:
    rows = []
    for rec in records:
        rows.append({
            "label": plan.label,
            "estimator": rec.estimator,
            "attack": plan.attack.label(),
            "alpha": repr(rec.alpha),
            "n": plan.n,
            "k": rec.k,
            "delta": repr(plan.delta),
            "n_rep": rec.n_rep,
            "error_q": repr(rec.error_q),
            "error_median": repr(rec.error_median),
            "master_seed": rec.seed,
        })
    return rows


def slope_rows(label: str, estimator: str, fit: SlopeFit) -> dict:
    return {
        "label": label,
        "estimator": estimator,
        "alpha_lo": repr(fit.alpha_window[0]),
        "alpha_hi": repr(fit.alpha_window[1]),
        "slope": repr(fit.slope),
        "intercept": repr(fit.intercept),
        "r_squared": repr(fit.r_squared),
        "points": fit.points_used,
    }


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
