"""Flat text run configs: one ``key = value`` per line, ``#`` comments.

Values use a small call grammar, e.g. ``dist = gpd(0.45, 1, 0)``,
``estimator = mom(rule=heavy_tail(3), partition=shuffled)``,
``alpha_grid = logspace(0.001, 0.05, 12)`` or an explicit comma list.
Unknown keys are rejected.  ``dump`` emits a canonical form that re-parses
to an identical RunConfig.
"""

import math
import re
from dataclasses import dataclass

from .contamination import AttackKind, AttackSpec
from .distributions import (
    Gaussian,
    GeneralizedPareto,
    HalfNormal,
    NegativeExponential,
    PointMass,
    StudentT,
)
from .errors import ConfigError
from .estimators import (
    CatoniEstimator,
    MedianOfMeans,
    SampleMean,
    SampleMedian,
    TrimmedMean,
)
from .harness import DEFAULT_MASTER_SEED, GRID_MAIN, ExperimentPlan
from .theory import FractionBlocks, HeavyTailBlocks, PowerLawBlocks

_KNOWN_KEYS = (
    "label", "dist", "attack", "estimator", "alpha_grid", "n", "delta",
    "n_rep", "seed", "out", "threads", "scale", "emit_svg",
)


@dataclass(frozen=True)
class RunConfig:
    dist: object
    estimators: tuple
    attack: AttackSpec
    alpha_grid: tuple
    n: int
    delta: float
    n_rep: int
    seed: int
    label: str
    out_dir: str
    threads: int
    scale: float
    emit_svg: bool

    def to_plan(self) -> ExperimentPlan:
        return ExperimentPlan(
            dist=self.dist, estimators=self.estimators, attack=self.attack,
            alpha_grid=self.alpha_grid, n=round(self.n * self.scale),
            delta=self.delta, n_rep=self.n_rep, master_seed=self.seed,
            label=self.label,
        )


_CALL_RE = re.compile(r"^\s*([a-z_][a-z0-9_]*)\s*(?:\((.*)\))?\s*$", re.S)


def _split_args(body: str):
    """Split a call body on top-level commas."""
    args, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            args.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or args:
        args.append(tail)
    return args


def _call(text: str, line: int):
    match = _CALL_RE.match(text)
    if not match:
        raise ConfigError(f"cannot parse value {text!r}", line, 1)
    name, body = match.group(1), match.group(2)
    args = _split_args(body) if body is not None else None
    return name, args


def _float(text: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", line, 1) from None


def _kwargs(args, line: int):
    """Split mixed positional/keyword args into (positional, mapping)."""
    pos, kw = [], {}
    for arg in args:
        if "=" in arg and re.match(r"^\s*[a-z_]+\s*=", arg):
            key, _, val = arg.partition("=")
            kw[key.strip()] = val.strip()
        else:
            pos.append(arg)
    return pos, kw


def parse_dist(text: str, line: int = 0):
    name, args = _call(text, line)
    args = args or []
    try:
        if name == "gaussian":
            return Gaussian(*(_float(a, line) for a in args)) if args else Gaussian()
        if name == "t":
            return StudentT(_float(args[0], line))
        if name == "gpd":
            return GeneralizedPareto(*(_float(a, line) for a in args))
        if name == "halfnormal":
            return HalfNormal()
        if name == "negexp":
            return NegativeExponential(_float(args[0], line)) if args else NegativeExponential()
        if name == "pointmass":
            return PointMass(_float(args[0], line))
    except (IndexError, TypeError):
        raise ConfigError(f"bad arguments for dist {name!r}: {text!r}", line, 1) from None
    raise ConfigError(f"unknown dist {name!r}", line, 1)


def parse_attack(text: str, line: int = 0) -> AttackSpec:
    name, args = _call(text, line)
    if name == "identity":
        return AttackSpec(AttackKind.IDENTITY, 0.0)
    if name == "largest_replacement":
        return AttackSpec(AttackKind.LARGEST_REPLACEMENT, 0.0)
    if name == "arbitrary_large":
        args = args or []
        magnitude = _float(args[0], line) if len(args) > 0 else 1e9
        sign = 1
        if len(args) > 1:
            if args[1] not in ("+", "-"):
                raise ConfigError(f"attack sign must be + or -, got {args[1]!r}", line, 1)
            sign = 1 if args[1] == "+" else -1
        return AttackSpec(AttackKind.ARBITRARY_LARGE, 0.0, magnitude, sign)
    raise ConfigError(f"unknown attack {name!r}", line, 1)


def _parse_rule(text: str, line: int):
    name, args = _call(text, line)
    args = args or []
    if name == "heavy_tail":
        return HeavyTailBlocks(_float(args[0], line))
    if name == "power_law":
        return PowerLawBlocks(_float(args[0], line), _float(args[1], line))
    if name == "fraction":
        return FractionBlocks(_float(args[0], line))
    raise ConfigError(f"unknown block rule {name!r}", line, 1)


def _auto_or_float(text: str, line: int):
    return None if text == "auto" else _float(text, line)


def parse_estimator(text: str, line: int = 0):
    name, args = _call(text, line)
    args = args or []
    pos, kw = _kwargs(args, line)
    if name == "mom":
        if "rule" not in kw:
            raise ConfigError(f"mom needs rule=..., got {text!r}", line, 1)
        partition = kw.get("partition", "shuffled")
        if partition not in ("shuffled", "sequential"):
            raise ConfigError(f"partition must be shuffled or sequential, got {partition!r}", line, 1)
        return MedianOfMeans(_parse_rule(kw["rule"], line), partition)
    if name == "trimmed":
        eps = kw.get("eps", pos[0] if pos else "auto")
        return TrimmedMean(_auto_or_float(eps, line))
    if name == "catoni":
        return CatoniEstimator(
            _auto_or_float(kw.get("scale", "auto"), line),
            _auto_or_float(kw.get("delta", "auto"), line),
        )
    if name == "sample_mean":
        return SampleMean()
    if name == "sample_median":
        return SampleMedian()
    raise ConfigError(f"unknown estimator {name!r}", line, 1)


def _parse_alpha_grid(text: str, line: int) -> tuple:
    if text.startswith("logspace"):
        _, args = _call(text, line)
        if not args or len(args) != 3:
            raise ConfigError(f"logspace needs (lo, hi, count), got {text!r}", line, 1)
        lo, hi, count = _float(args[0], line), _float(args[1], line), int(_float(args[2], line))
        import numpy as np

        return tuple(float(a) for a in np.logspace(math.log10(lo), math.log10(hi), count))
    return tuple(_float(part, line) for part in _split_args(text))


def parse_config(text: str) -> RunConfig:
    values = {
        "label": "sweep",
        "dist": None,
        "attack": AttackSpec(AttackKind.LARGEST_REPLACEMENT, 0.0),
        "alpha_grid": GRID_MAIN,
        "n": 100000,
        "delta": 0.05,
        "n_rep": 100,
        "seed": DEFAULT_MASTER_SEED,
        "out": ".",
        "threads": 1,
        "scale": 1.0,
        "emit_svg": False,
    }
    estimators = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected key = value, got {raw!r}", lineno, 1)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, 1)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno, len(raw))
        if key == "dist":
            values["dist"] = parse_dist(value, lineno)
        elif key == "attack":
            values["attack"] = parse_attack(value, lineno)
        elif key == "estimator":
            estimators.append(parse_estimator(value, lineno))
        elif key == "alpha_grid":
            values["alpha_grid"] = _parse_alpha_grid(value, lineno)
        elif key in ("n", "n_rep", "seed", "threads"):
            values[key] = int(_float(value, lineno))
        elif key in ("delta", "scale"):
            values[key] = _float(value, lineno)
        elif key == "emit_svg":
            if value not in ("true", "false"):
                raise ConfigError(f"emit_svg must be true or false, got {value!r}", lineno, 1)
            values[key] = value == "true"
        else:  # label, out
            values[key] = value
    if values["dist"] is None:
        raise ConfigError("config must set dist")
    if not estimators:
        estimators.append(MedianOfMeans(HeavyTailBlocks(3.0)))
    return RunConfig(
        dist=values["dist"], estimators=tuple(estimators), attack=values["attack"],
        alpha_grid=tuple(values["alpha_grid"]), n=values["n"], delta=values["delta"],
        n_rep=values["n_rep"], seed=values["seed"], label=values["label"],
        out_dir=values["out"], threads=values["threads"], scale=values["scale"],
        emit_svg=values["emit_svg"],
    )


def _fmt_dist(dist) -> str:
    if isinstance(dist, Gaussian):
        return f"gaussian({dist.mu!r}, {dist.sigma!r})"
    if isinstance(dist, StudentT):
        return f"t({dist.nu!r})"
    if isinstance(dist, GeneralizedPareto):
        return f"gpd({dist.shape!r}, {dist.scale!r}, {dist.loc!r})"
    if isinstance(dist, HalfNormal):
        return "halfnormal"
    if isinstance(dist, NegativeExponential):
        return f"negexp({dist.rate!r})"
    return f"pointmass({dist.value!r})"


def _fmt_attack(attack: AttackSpec) -> str:
    if attack.kind is AttackKind.ARBITRARY_LARGE:
        return f"arbitrary_large({attack.magnitude!r}, {'+' if attack.sign > 0 else '-'})"
    return attack.kind.value


def _fmt_rule(rule) -> str:
    if isinstance(rule, HeavyTailBlocks):
        return f"heavy_tail({rule.gamma!r})"
    if isinstance(rule, PowerLawBlocks):
        return f"power_law({rule.xi!r}, {rule.exponent!r})"
    return f"fraction({rule.beta!r})"


def _fmt_estimator(est) -> str:
    if isinstance(est, MedianOfMeans):
        return f"mom(rule={_fmt_rule(est.rule)}, partition={est.partition})"
    if isinstance(est, TrimmedMean):
        return f"trimmed(eps={'auto' if est.epsilon is None else repr(est.epsilon)})"
    if isinstance(est, CatoniEstimator):
        scale = "auto" if est.scale_guess is None else repr(est.scale_guess)
        delta = "auto" if est.delta is None else repr(est.delta)
        return f"catoni(scale={scale}, delta={delta})"
    if isinstance(est, SampleMean):
        return "sample_mean"
    return "sample_median"


def dump_config(config: RunConfig) -> str:
    lines = [
        f"label = {config.label}",
        f"dist = {_fmt_dist(config.dist)}",
        f"attack = {_fmt_attack(config.attack)}",
    ]
    lines.extend(f"estimator = {_fmt_estimator(est)}" for est in config.estimators)
    lines.append("alpha_grid = " + ", ".join(repr(a) for a in config.alpha_grid))
    lines.extend([
        f"n = {config.n}",
        f"delta = {config.delta!r}",
        f"n_rep = {config.n_rep}",
        f"seed = {config.seed}",
        f"out = {config.out_dir}",
        f"threads = {config.threads}",
        f"scale = {config.scale!r}",
        f"emit_svg = {'true' if config.emit_svg else 'false'}",
    ])
    return "\n".join(lines) + "\n"
