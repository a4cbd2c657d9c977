"""Seeded Monte Carlo experiments over random channels and random inputs.

Each experiment draws its trials from disjoint sub-streams of one SeedSpec
(trial t uses stream_index + t), so results are independent of execution
order and can fan out over threads; the environment variable
CHANNEL_DICHOTOMY_THREADS caps the worker count (default 1).  Fractions are
reported with Wilson 95% intervals, which behave correctly at 0 and 1 where
the interesting theorems live.  Result files are byte-identical across runs
of the same config except for the wall_clock_s field.
"""

import csv
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from math import sqrt

from ._version import __version__
from .channel import KrausChannel, output_state, rank
from .entanglement import Verdict, VerdictKind, classify_channel, is_marginally_cyclic, ppt_verdict
from .errors import InvalidInput
from .invariants import is_extremal
from .linalg import DEFAULT_TOL, Tolerance
from .sampling import RNG_ID, SeedSpec, sample_sphere, sample_vr

logger = logging.getLogger(__name__)

_Z95 = 1.959963984540054

EP_CLASSES = ("entanglement_preserving", "entanglement_breaking", "unknown")
ZERO_ONE_CLASSES = ("entangled", "separable")
EXTREMAL_CLASSES = ("extremal", "not_extremal")
CYCLICITY_CLASSES = ("marginally_cyclic", "not_marginally_cyclic")
RANK_CLASSES = ("rank_equals_r", "rank_below_r")


class ExperimentKind(str, Enum):
    EP_PROBABILITY = "EpProbability"
    EXTREMAL_FRACTION = "ExtremalFraction"
    ZERO_ONE = "ZeroOne"
    CYCLICITY_DENSITY = "CyclicityDensity"
    RANK_CONCENTRATION = "RankConcentration"
    CRITICAL_RANK_SCAN = "CriticalRankScan"


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run: experiment kind, dimensions, trial count, seed, tolerance."""

    kind: ExperimentKind
    n: int
    m: int
    r: int
    trials: int
    seed: SeedSpec
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidInput(f"trials must be >= 1, got {self.trials}")
        if self.n < 1 or self.m < 1 or self.r < 0:
            raise InvalidInput(
                f"invalid dimensions n={self.n}, m={self.m}, r={self.r}"
            )


@dataclass(frozen=True)
class ExperimentResult:
    """Counts, estimates and Wilson intervals for one experiment run."""

    config: ExperimentConfig
    counts: dict
    estimates: dict
    intervals: dict
    wall_clock_s: float
    per_trial_seeds: tuple
    notes: tuple = ()
    canonical: Verdict = None


def wilson_interval(count: int, trials: int, z: float = _Z95):
    """Wilson score interval for a binomial fraction."""
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    p = count / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = (z / denom) * sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    return (max(0.0, center - half), min(1.0, center + half))


def _worker_count() -> int:
    raw = os.environ.get("CHANNEL_DICHOTOMY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("ignoring non-integer CHANNEL_DICHOTOMY_THREADS=%r", raw)
        return 1


def _map_trials(fn, trials: int) -> list:
    """Evaluate fn(0..trials-1); order-independent, optionally threaded."""
    workers = _worker_count()
    if workers <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def _assemble(config, outcomes, classes, t0, notes=(), canonical=None) -> ExperimentResult:
    counts = Counter(outcomes)
    full = {cls: counts.get(cls, 0) for cls in classes}
    trials = config.trials
    estimates = {cls: c / trials for cls, c in full.items()}
    intervals = {cls: wilson_interval(c, trials) for cls, c in full.items()}
    seeds = tuple(
        (config.seed.master_seed, config.seed.stream_index + t) for t in range(trials)
    )
    return ExperimentResult(
        config=config,
        counts=full,
        estimates=estimates,
        intervals=intervals,
        wall_clock_s=time.perf_counter() - t0,
        per_trial_seeds=seeds,
        notes=tuple(notes),
        canonical=canonical,
    )


def run_ep_probability(config: ExperimentConfig) -> ExperimentResult:
    """Fraction of random rank-r channels that preserve entanglement."""
    t0 = time.perf_counter()
    n, m, r, tol = config.n, config.m, config.r, config.tol

    def trial(t: int) -> str:
        phi = sample_vr(n, m, r, config.seed.stream(t))
        verdict = classify_channel(phi, tol)
        if verdict.entangled is True:
            return "entanglement_preserving"
        if verdict.entangled is False:
            return "entanglement_breaking"
        return "unknown"

    outcomes = _map_trials(trial, config.trials)
    notes = []
    if n * m > 6:
        notes.append(
            "criteria are one-sided above 2x3: the entanglement_preserving "
            "fraction is a lower bound"
        )
    return _assemble(config, outcomes, EP_CLASSES, t0, notes)


def run_zero_one(
    phi: KrausChannel, trials: int, seed: SeedSpec, tol: Tolerance = DEFAULT_TOL
) -> ExperimentResult:
    """Entangled fraction of output states over uniformly random pure inputs.

    Also records the verdict at the canonical maximally entangled vector;
    the zero-one law says the fraction is 0 or 1 and agrees with it.
    Requires dims in the decisive PPT regime (m * n <= 6).
    """
    n, m = phi.dim_h, phi.dim_k
    if n * m > 6:
        raise InvalidInput(
            f"zero-one experiment needs m*n <= 6 for decisive verdicts, got {m * n}"
        )
    config = ExperimentConfig(
        ExperimentKind.ZERO_ONE, n=n, m=m, r=len(phi.ops), trials=trials, seed=seed, tol=tol
    )
    t0 = time.perf_counter()
    canonical = classify_channel(phi, tol)

    def trial(t: int) -> str:
        xi = sample_sphere(n * n, config.seed.stream(t))
        verdict = ppt_verdict(output_state(phi, xi, tol), tol)
        return "entangled" if verdict.entangled else "separable"

    outcomes = _map_trials(trial, trials)
    return _assemble(config, outcomes, ZERO_ONE_CLASSES, t0, canonical=canonical)


def run_extremal_fraction(config: ExperimentConfig) -> ExperimentResult:
    """Fraction of random rank-r channels that are extreme points."""
    t0 = time.perf_counter()
    n, m, r, tol = config.n, config.m, config.r, config.tol

    def trial(t: int) -> str:
        phi = sample_vr(n, m, r, config.seed.stream(t))
        return "extremal" if is_extremal(phi, tol).extremal else "not_extremal"

    outcomes = _map_trials(trial, config.trials)
    return _assemble(config, outcomes, EXTREMAL_CLASSES, t0)


def run_cyclicity_density(
    n: int, trials: int, seed: SeedSpec, tol: Tolerance = DEFAULT_TOL
) -> ExperimentResult:
    """Fraction of uniform unit vectors in C^(n^2) with full Schmidt rank."""
    config = ExperimentConfig(
        ExperimentKind.CYCLICITY_DENSITY, n=n, m=n, r=0, trials=trials, seed=seed, tol=tol
    )
    t0 = time.perf_counter()

    def trial(t: int) -> str:
        xi = sample_sphere(n * n, config.seed.stream(t))
        return "marginally_cyclic" if is_marginally_cyclic(xi, n, tol) else "not_marginally_cyclic"

    outcomes = _map_trials(trial, trials)
    return _assemble(config, outcomes, CYCLICITY_CLASSES, t0)


def run_rank_concentration(config: ExperimentConfig) -> ExperimentResult:
    """Fraction of sampled r-tuples whose reduced rank equals the nominal r."""
    t0 = time.perf_counter()
    n, m, r, tol = config.n, config.m, config.r, config.tol

    def trial(t: int) -> str:
        phi = sample_vr(n, m, r, config.seed.stream(t))
        return "rank_equals_r" if rank(phi, tol) == r else "rank_below_r"

    outcomes = _map_trials(trial, config.trials)
    return _assemble(config, outcomes, RANK_CLASSES, t0)


def run_critical_rank_scan(
    n: int, m: int, trials: int, seed: SeedSpec, tol: Tolerance = DEFAULT_TOL
) -> list:
    """EP probability for every rank r = 1..mn; brackets the critical rank.

    Each rank gets a disjoint block of trial streams so rows are individually
    reproducible.  Requires m * n <= 6.
    """
    if n * m > 6:
        raise InvalidInput(f"critical-rank scan needs m*n <= 6, got {m * n}")
    results = []
    for r in range(1, m * n + 1):
        config = ExperimentConfig(
            ExperimentKind.EP_PROBABILITY,
            n=n, m=m, r=r, trials=trials,
            seed=seed.stream((r - 1) * trials),
            tol=tol,
        )
        results.append(run_ep_probability(config))
    return results


# ---------------------------------------------------------------------------
# Serialization: JSON mirrors the CSV with full config echo.
# ---------------------------------------------------------------------------


def result_to_json_dict(result: ExperimentResult) -> dict:
    cfg = result.config
    doc = {
        "tool": {"name": "channel-dichotomy", "version": __version__, "rng": RNG_ID},
        "config": {
            "kind": cfg.kind.value,
            "n": cfg.n,
            "m": cfg.m,
            "r": cfg.r,
            "trials": cfg.trials,
            "master_seed": cfg.seed.master_seed,
            "stream_index": cfg.seed.stream_index,
            "rel_eps": cfg.tol.rel_eps,
        },
        "counts": dict(result.counts),
        "estimates": {k: float(v) for k, v in result.estimates.items()},
        "wilson_95": {k: [float(lo), float(hi)] for k, (lo, hi) in result.intervals.items()},
        "wall_clock_s": result.wall_clock_s,
        "per_trial_seeds": [[ms, si] for ms, si in result.per_trial_seeds],
        "notes": list(result.notes),
    }
    if result.canonical is not None:
        doc["canonical_verdict"] = result.canonical.to_json_dict()
    return doc


def dumps_result(result: ExperimentResult) -> str:
    return json.dumps(result_to_json_dict(result), sort_keys=True, indent=2) + "\n"


EXPERIMENT_CSV_HEADER = [
    "kind", "n", "m", "r", "trials", "master_seed", "stream_index", "rel_eps",
    "outcome", "count", "fraction", "ci_low", "ci_high",
]


def experiment_csv_rows(result: ExperimentResult) -> list:
    """One row per outcome class, prefixed by the config echo."""
    cfg = result.config
    prefix = [
        cfg.kind.value, cfg.n, cfg.m, cfg.r, cfg.trials,
        cfg.seed.master_seed, cfg.seed.stream_index, cfg.tol.rel_eps,
    ]
    rows = []
    for cls in result.counts:
        lo, hi = result.intervals[cls]
        rows.append(prefix + [cls, result.counts[cls], result.estimates[cls], lo, hi])
    return rows


def write_experiment_csv(results, path) -> None:
    if isinstance(results, ExperimentResult):
        results = [results]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(EXPERIMENT_CSV_HEADER)
        for result in results:
            writer.writerows(experiment_csv_rows(result))


SCAN_CSV_HEADER = ["r", "ep_fraction", "ci_low", "ci_high"]


def write_scan_csv(results, path) -> None:
    """Critical-rank scan table: one row per rank."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCAN_CSV_HEADER)
        for result in results:
            frac = result.estimates["entanglement_preserving"]
            lo, hi = result.intervals["entanglement_preserving"]
            writer.writerow([result.config.r, frac, lo, hi])
