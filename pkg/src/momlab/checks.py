"""Verification suites behind the ``verify`` command.

Each suite returns CheckRow records; a run passes iff every row passes.  The
anchor column names the statement a check exercises so report lines can be
traced back to the corresponding bound, lemma, or invariant.
"""

import math
from dataclasses import dataclass

import numpy as np

from .contamination import AttackKind, AttackSpec, apply_attack, verify_contamination
from .distributions import (
    Gaussian,
    GeneralizedPareto,
    HalfNormal,
    NegativeExponential,
    StudentT,
    block_mean_quantile_analytic,
    moments,
    sample,
)
from .estimators import MedianOfMeans, TrimmedMean, median_of_means, sample_mean, trimmed_mean
from .harness import (
    DEFAULT_MASTER_SEED,
    ExperimentPlan,
    fit_slope,
    log_grid,
    replication_error_matrix,
    run_sweep,
)
from .quantlab import (
    contaminated_block_count,
    empirical_block_mean_quantile,
    normal_approx_gap,
    order_statistic_coverage_grid,
    quantile_curve,
    symmetric_class_check,
)
from .theory import (
    HeavyTailBlocks,
    bound_finite_variance,
    bound_general_quantile,
    resolve_blocks,
)

SUITE_NAMES = ("lemmas", "bounds", "invariants")

# analytic KS distance between the standardized half-normal and N(0,1);
# attained at the left support edge, Phi(-mu/sigma) for mu, sigma of |Z|
HALFNORMAL_GAP_M1 = 0.0928166


@dataclass(frozen=True)
class CheckRow:
    suite: str
    check: str
    anchor: str
    measured: float
    comparison: str  # "<=", ">=", ">"
    threshold: float
    passed: bool


def _row(suite, check, anchor, measured, comparison, threshold):
    measured = float(measured)
    threshold = float(threshold)
    if comparison == "<=":
        ok = measured <= threshold
    elif comparison == ">=":
        ok = measured >= threshold
    elif comparison == ">":
        ok = measured > threshold
    else:
        raise ValueError(f"bad comparison {comparison!r}")
    return CheckRow(suite, check, anchor, measured, comparison, threshold, ok)


def lemmas_suite(master_seed: int = DEFAULT_MASTER_SEED, threads: int = 1):
    rows = []
    # order-statistic sandwich: X_(r) against the shifted quantiles
    for n in (1000, 10000):
        grid = order_statistic_coverage_grid(
            Gaussian(0.0, 1.0), n, [n // 4, n // 2, 3 * n // 4], [0.05, 0.2],
            reps=10**4, seed=master_seed,
        )
        for (r, delta), cov in sorted(grid.items()):
            threshold = 1.0 - delta - 0.01
            rows.append(_row(
                "lemmas", f"order_stat_coverage[n={n},r={r},delta={delta}].upper",
                "Lemma A.1", cov.upper, ">=", threshold,
            ))
            rows.append(_row(
                "lemmas", f"order_stat_coverage[n={n},r={r},delta={delta}].lower",
                "Lemma A.1", cov.lower, ">=", threshold,
            ))
    # contaminated lower-half blocks: mean count exceeds 1 - exp(-1/2)
    n = 10**4
    for alpha in (0.005, 0.01):
        k = math.ceil(2.5 * alpha * n)  # keeps m = floor(n/k) < 1/(2*alpha)
        stats = contaminated_block_count(n, k, alpha, reps=10**4, seed=master_seed)
        rows.append(_row(
            "lemmas", f"contaminated_block_mean[alpha={alpha},k={k}]",
            "Lemma B.1 / Eq. (23)", stats.mean_z, ">", 1.0 - math.exp(-0.5),
        ))
    # normal-approximation gap: golden value at m=1 and 1/sqrt(m) decay trend
    gaps = {m: normal_approx_gap(HalfNormal(), m, 10**5, master_seed).g_hat for m in (1, 4, 16, 64)}
    rows.append(_row("lemmas", "halfnormal_gap[m=1].lo", "Definition B.2", gaps[1], ">=", 0.05))
    rows.append(_row("lemmas", "halfnormal_gap[m=1].hi", "Definition B.2", gaps[1], "<=", 0.30))
    mc_se = 0.5 / math.sqrt(10**5)
    for m in (1, 4, 16):
        rows.append(_row(
            "lemmas", f"halfnormal_gap_decay[{m}->{4 * m}]", "Appendix A.4",
            gaps[4 * m], "<=", gaps[m] + 3 * mc_se,
        ))
    return rows


def theorem31_exceed_fractions(master_seed: int = DEFAULT_MASTER_SEED, threads: int = 1):
    """Fraction of replications whose error exceeds the general quantile bound."""
    dist = Gaussian(0.0, 1.0)
    n, delta, n_rep = 10**4, 0.05, 10**4
    rule = HeavyTailBlocks(3.0)
    alphas = (0.0, 0.01, 0.05)
    errs = replication_error_matrix(
        dist, (MedianOfMeans(rule),), AttackSpec(AttackKind.LARGEST_REPLACEMENT, 0.0),
        alphas, n, delta, n_rep, master_seed, threads,
    )
    out = {}
    for a_idx, alpha in enumerate(alphas):
        k = resolve_blocks(rule, n, alpha, delta).k
        m = n // k
        bound = bound_general_quantile(
            lambda q: block_mean_quantile_analytic(dist, m, q), k, m, alpha, delta
        )
        out[alpha] = (float(np.mean(errs[:, a_idx, 0] > bound)), bound, k)
    return out


def bounds_suite(master_seed: int = DEFAULT_MASTER_SEED, threads: int = 1):
    rows = []
    # general quantile bound holds with probability >= 1 - delta under attack
    for alpha, (frac, bound, k) in theorem31_exceed_fractions(master_seed, threads).items():
        rows.append(_row(
            "bounds", f"quantile_bound_coverage[alpha={alpha},k={k}]",
            "Theorem 3.1", frac, "<=", 0.05,
        ))
    # uncontaminated finite-variance deviation, explicit constant
    dist = GeneralizedPareto(0.45, 1.0, 0.0)
    mom = moments(dist)
    n, delta, n_rep = 10**5, 0.05, 10**3
    errs = np.sort(replication_error_matrix(
        dist, (MedianOfMeans(HeavyTailBlocks(2.5)),), AttackSpec(AttackKind.IDENTITY, 0.0),
        (0.0,), n, delta, n_rep, master_seed, threads,
    )[:, 0, 0])
    q95 = float(errs[math.ceil((1.0 - delta) * n_rep) - 1])
    bv = bound_finite_variance(n, 0.0, delta, 2.5, mom.sigma)
    rows.append(_row(
        "bounds", "finite_variance_deviation[alpha=0]", "Theorem 3.2 / Eq. (8)",
        q95, "<=", bv.value,
    ))
    rows.append(_row(
        "bounds", "finite_variance_deviation_nonvacuous", "Theorem 3.2 / Eq. (8)",
        q95, "<=", 10.0 * mom.sigma * math.sqrt(math.log(2.0 / delta) / n),
    ))
    # lower-bound regime: arbitrary-large attack forces a sqrt(alpha) floor
    plan = ExperimentPlan(
        dist=Gaussian(0.0, 1.0),
        estimators=(MedianOfMeans(HeavyTailBlocks(3.0)),),
        attack=AttackSpec(AttackKind.ARBITRARY_LARGE, 0.0, 1e9, 1),
        alpha_grid=log_grid(1e-3, 3e-2, 10), n=10**5, delta=0.05, n_rep=100,
        master_seed=master_seed, label="lower_bound", reference_slope=0.5,
    )
    records = run_sweep(plan, threads)
    fit = fit_slope(records, (1e-3, 3e-2), field="error_median")
    rows.append(_row("bounds", "lower_bound_slope.min", "Theorem 3.4 / Eq. (12)", fit.slope, ">=", 0.40))
    rows.append(_row("bounds", "lower_bound_slope.max", "Theorem 3.4 / Eq. (12)", fit.slope, "<=", 0.60))
    rows.append(_row(
        "bounds", "lower_bound_median_positive", "Theorem 3.4 / Eq. (12)",
        min(rec.error_median for rec in records), ">", 0.0,
    ))
    # class hierarchy: alpha^1 < alpha^(2/3) < alpha^(1/2) for small alpha
    a = 1e-4
    ordered = a**1.0 < a ** (2.0 / 3.0) < a**0.5
    rows.append(_row("bounds", "bias_order_hierarchy", "Table 1", 1.0 if ordered else 0.0, ">=", 1.0))
    return rows


def invariants_suite(master_seed: int = DEFAULT_MASTER_SEED, threads: int = 1):
    rows = []
    x = sample(Gaussian(0.0, 1.0), 500, master_seed)
    a, b, k, seed = 3.7, 2.5, 17, 11
    base = median_of_means(x, k, "shuffled", seed)
    rows.append(_row(
        "invariants", "mom_shift_equivariance", "estimator invariants",
        abs(median_of_means(x + a, k, "shuffled", seed) - (a + base)), "<=", 1e-9,
    ))
    rows.append(_row(
        "invariants", "mom_scale_equivariance", "estimator invariants",
        abs(median_of_means(b * x, k, "shuffled", seed) - b * base), "<=", 1e-9,
    ))
    tm = trimmed_mean(x, 0.1)
    rows.append(_row(
        "invariants", "trimmed_shift_equivariance", "estimator invariants",
        abs(trimmed_mean(x + a, 0.1) - (a + tm)), "<=", 1e-9,
    ))
    rows.append(_row(
        "invariants", "mom_k1_is_mean", "estimator invariants",
        abs(median_of_means(x, 1) - sample_mean(x)), "<=", 1e-12,
    ))
    half = np.sort(x)[(x.size + 1) // 2 - 1]
    rows.append(_row(
        "invariants", "mom_kn_is_median_orderstat", "estimator invariants",
        abs(median_of_means(x, x.size) - half), "<=", 0.0,
    ))
    # breakdown containment: fewer than half the blocks corrupted
    k = 21
    m = x.size // k
    clean_means = x[: k * m].reshape(k, m).mean(axis=1)
    corrupted = x.copy()
    idx = np.arange(0, ((k + 1) // 2 - 1))  # one sample in each of ceil(k/2)-1 blocks
    corrupted[idx * m] = 1e12
    value = median_of_means(corrupted, k)
    outside = max(0.0, float(clean_means.min() - value), float(value - clean_means.max()))
    rows.append(_row("invariants", "mom_breakdown_containment", "estimator invariants", outside, "<=", 0.0))
    # every attack satisfies the contamination contract
    clean = sample(StudentT(3.0), 1000, master_seed + 1)
    attacks = [
        AttackSpec(AttackKind.IDENTITY, 0.0),
        AttackSpec(AttackKind.LARGEST_REPLACEMENT, 0.13),
        AttackSpec(AttackKind.ARBITRARY_LARGE, 0.3, 1e9, 1),
        AttackSpec(AttackKind.ARBITRARY_LARGE, 0.49, 1e6, -1),
    ]
    for att in attacks:
        contaminated, _ = apply_attack(att, clean, master_seed + 2)
        ok = verify_contamination(clean, contaminated, att.alpha)
        rows.append(_row(
            "invariants", f"contamination_contract[{att.label()},alpha={att.alpha}]",
            "Definition 2.1 / Eq. (1)", 1.0 if ok else 0.0, ">=", 1.0,
        ))
    # quantile curve is nondecreasing in q
    curve = quantile_curve(Gaussian(0.0, 1.0), 7, (0.1, 0.3, 0.5, 0.7, 0.9), 2 * 10**4, master_seed)
    violations = sum(1 for lo, hi in zip(curve.values, curve.values[1:]) if hi < lo)
    rows.append(_row("invariants", "quantile_curve_monotone", "Definition 3.1", violations, "<=", 0.0))
    # analytic block-mean quantiles match the Monte Carlo oracle
    for spec in (Gaussian(0.0, 1.0), NegativeExponential(1.0)):
        for m in (1, 10):
            cur = quantile_curve(spec, m, (0.25, 0.9), 3 * 10**4, master_seed)
            for q, value, se in zip(cur.qs, cur.values, cur.se):
                exact = block_mean_quantile_analytic(spec, m, q)
                rows.append(_row(
                    "invariants", f"analytic_vs_empirical[{spec.label()},m={m},q={q}]",
                    "Definition 3.1", abs(value - exact), "<=", 3.0 * se + 1e-12,
                ))
    # symmetric specs: upper and lower quantiles mirror
    cur = quantile_curve(StudentT(3.0), 5, (0.25, 0.4, 0.6, 0.75), 5 * 10**4, master_seed)
    for i, j in ((0, 3), (1, 2)):
        rows.append(_row(
            "invariants", f"symmetric_quantile_mirror[q={cur.qs[j]}]", "Appendix A.2",
            abs(cur.values[i] + cur.values[j]), "<=", 3.0 * (cur.se[i] + cur.se[j]),
        ))
    # linear-quantile class membership for the symmetric families
    for spec in (Gaussian(0.0, 1.0), StudentT(3.0)):
        res = symmetric_class_check(
            spec, 0.3, 6.0, (1, 10, 100), (0.02, 0.05, 0.1, 0.2, 0.3), 10**5, master_seed
        )
        rows.append(_row(
            "invariants", f"symmetric_class_membership[{spec.label()}]",
            "Definition 5.1 / Eq. (15)", res.worst_ratio, "<=", 6.0,
        ))
        rows.append(_row(
            "invariants", f"symmetric_class_passed[{spec.label()}]",
            "Definition 5.1 / Eq. (15)", 1.0 if res.passed else 0.0, ">=", 1.0,
        ))
    # sweep output is bit-identical across thread counts
    plan = ExperimentPlan(
        dist=Gaussian(0.0, 1.0),
        estimators=(MedianOfMeans(HeavyTailBlocks(3.0)), TrimmedMean(0.05)),
        attack=AttackSpec(AttackKind.LARGEST_REPLACEMENT, 0.0),
        alpha_grid=(0.01, 0.02, 0.04), n=2000, delta=0.05, n_rep=20,
        master_seed=master_seed, label="threads",
    )
    rec1 = run_sweep(plan, threads=1)
    rec4 = run_sweep(plan, threads=4)
    same = rec1 == rec4
    rows.append(_row("invariants", "thread_count_reproducible", "harness invariants", 1.0 if same else 0.0, ">=", 1.0))
    # error quantile degrades monotonically in alpha (one inversion allowed)
    plan = ExperimentPlan(
        dist=Gaussian(0.0, 1.0),
        estimators=(MedianOfMeans(HeavyTailBlocks(3.0)),),
        attack=AttackSpec(AttackKind.LARGEST_REPLACEMENT, 0.0),
        alpha_grid=log_grid(2e-3, 5e-2, 6), n=5000, delta=0.05, n_rep=100,
        master_seed=master_seed, label="monotone",
    )
    records = run_sweep(plan, threads)
    inversions = sum(1 for r1, r2 in zip(records, records[1:]) if r2.error_q < r1.error_q)
    rows.append(_row("invariants", "monotone_degradation", "harness invariants", inversions, "<=", 1.0))
    return rows


def run_suites(names, master_seed: int = DEFAULT_MASTER_SEED, threads: int = 1):
    table = {"lemmas": lemmas_suite, "bounds": bounds_suite, "invariants": invariants_suite}
    rows = []
    for name in names:
        rows.extend(table[name](master_seed, threads))
    return rows
