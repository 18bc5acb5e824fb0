"""Adversarial attacks and the contamination-contract verifier.

An attack replaces exactly ``floor(alpha * n)`` samples.  The verifier checks
the defining contract: at least ``ceil((1 - alpha) * n)`` of the contaminated
values must survive from the clean multiset.
"""

import enum
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .rng import generator

# guards against float round-off in alpha * n right at integer boundaries
_EPS = 1e-9


def replaced_count(alpha: float, n: int) -> int:
    """floor(alpha * n), robust to float round-off."""
    return int(math.floor(alpha * n + _EPS))


class AttackKind(enum.Enum):
    IDENTITY = "identity"
    LARGEST_REPLACEMENT = "largest_replacement"
    ARBITRARY_LARGE = "arbitrary_large"


@dataclass(frozen=True)
class AttackSpec:
    kind: AttackKind
    alpha: float
    magnitude: float = 1e9  # ARBITRARY_LARGE: outliers land at mean + sign*magnitude*std
    sign: int = 1

    def __post_init__(self):
        if not 0.0 <= self.alpha < 0.5:
            raise ParameterError(f"attack alpha must be in [0, 0.5), got {self.alpha}")
        if self.kind is AttackKind.ARBITRARY_LARGE:
            if not self.magnitude > 0:
                raise ParameterError(f"magnitude must be > 0, got {self.magnitude}")
            if self.sign not in (1, -1):
                raise ParameterError(f"sign must be +1 or -1, got {self.sign}")

    def label(self) -> str:
        if self.kind is AttackKind.ARBITRARY_LARGE:
            return f"arbitrary_large({self.magnitude:g}, {'+' if self.sign > 0 else '-'})"
        return self.kind.value


@dataclass(frozen=True)
class ContaminationReport:
    modified_indices: frozenset
    replaced_values: np.ndarray  # the values written at modified_indices


def _largest_indices(x: np.ndarray, t: int) -> np.ndarray:
    """Indices of the t largest values; ties broken toward the highest index."""
    n = x.size
    if t == 0:
        return np.empty(0, dtype=np.intp)
    if t == n:
        return np.arange(n, dtype=np.intp)
    # O(n): boundary value via selection, then resolve ties on the boundary only
    boundary = np.partition(x, n - t)[n - t]
    strict = np.flatnonzero(x > boundary)
    need = t - strict.size
    if need == 0:
        return strict
    equal = np.flatnonzero(x == boundary)
    return np.concatenate([strict, equal[-need:]])


def apply_attack(attack: AttackSpec, clean: np.ndarray, seed: int):
    """Apply an attack to a clean sample.

    Returns (contaminated, report).  The input is never mutated; exactly
    ``floor(alpha * n)`` positions change.
    """
    x = np.asarray(clean, dtype=float)
    n = x.size
    if n == 0:
        raise ParameterError("clean sample must be nonempty")
    t = replaced_count(attack.alpha, n) if attack.kind is not AttackKind.IDENTITY else 0
    out = x.copy()
    if t == 0:
        return out, ContaminationReport(frozenset(), np.empty(0))
    if attack.kind is AttackKind.LARGEST_REPLACEMENT:
        idx = _largest_indices(x, t)
        out[idx] = x.min()
    else:  # ARBITRARY_LARGE
        rng = generator(seed)
        idx = rng.choice(n, size=t, replace=False)
        scale = float(np.std(x, ddof=1)) if n > 1 else 0.0
        if not (scale > 0 and math.isfinite(scale)):
            scale = 1.0
        out[idx] = float(np.mean(x)) + attack.sign * attack.magnitude * scale
    return out, ContaminationReport(frozenset(int(i) for i in idx), out[idx].copy())


def verify_contamination(clean: np.ndarray, contaminated: np.ndarray, alpha: float) -> bool:
    """True iff >= ceil((1-alpha)*n) contaminated values come from the clean multiset."""
    clean = np.asarray(clean, dtype=float)
    contaminated = np.asarray(contaminated, dtype=float)
    if clean.shape != contaminated.shape:
        raise ParameterError(
            f"length mismatch: clean has {clean.size}, contaminated has {contaminated.size}"
        )
    n = clean.size
    counts = Counter(clean.tolist())
    survivors = 0
    for v in contaminated.tolist():
        if counts.get(v, 0) > 0:
            counts[v] -= 1
            survivors += 1
    return survivors >= n - replaced_count(alpha, n)
