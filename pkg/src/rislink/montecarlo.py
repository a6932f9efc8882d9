"""Seeded trial scheduling and statistical aggregation into curve sets.

This is the only module that schedules parallel work.  Every trial draws
from its own stream derived from (seed, trial index) and the reduction
runs in trial order with exact compensated summation, so results are
byte-identical for any worker count or execution order.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from . import scenarios
from .rng import RngStream
from .scenarios import BOTH, SIDE, ScenarioConfig, TrialResult


@dataclass(frozen=True)
class Curve:
    """One labelled curve: per-x mean rate, standard error, trial count."""

    label: str
    x: Tuple[float, ...]
    mean: Tuple[float, ...]
    stderr: Tuple[float, ...]
    trials: int


@dataclass(frozen=True)
class CurveSet:
    """Aggregated Monte Carlo output of one experiment.

    Curves are stored sorted by label with x ascending, matching the CSV
    row order, so emit/parse round-trips reproduce the value exactly.
    """

    scenario: str
    seed: int
    config_digest: str
    curves: Tuple[Curve, ...]


def aggregate(samples: Sequence[float]) -> Tuple[float, float]:
    """Mean and standard error of a sample list.

    Uses exact compensated summation, so the result is independent of
    sample order.  Standard error is sample std (n-1 denominator) over
    sqrt(n); a single sample has standard error 0.
    """
    n = len(samples)
    if n == 0:
        raise ValueError("cannot aggregate an empty sample list")
    mean = math.fsum(samples) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((s - mean) ** 2 for s in samples) / (n - 1)
    return mean, math.sqrt(var / n)


def config_digest(config: ScenarioConfig) -> str:
    """Short digest uniquely identifying the generating configuration."""
    blob = json.dumps(config.canonical_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _mode_of(label: str) -> str:
    return label.rsplit("(", 1)[-1].rstrip(")")


def run_experiment(config: ScenarioConfig, workers: int = 1) -> CurveSet:
    """Run all trials of one experiment and aggregate them into curves.

    Deterministic per (seed, config): trial i draws from stream
    (seed, i), and aggregation order is fixed by trial index regardless
    of ``workers``.  Rate curves are normalized to the maximum mean of
    the best curve when ``config.normalize`` is set; side-metric curves
    stay raw.  ``config.mode`` filters which curves are reported
    (normalization happens first, so surviving values do not depend on
    the filter).
    """
    config.validate()
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    trial_fn = scenarios.TRIAL_FUNCTIONS[config.scenario]

    def one(i: int) -> TrialResult:
        gen = RngStream(config.seed, i).generator()
        return TrialResult(i, config.mode, trial_fn(config, gen))

    if workers == 1:
        results: List[TrialResult] = [one(i) for i in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(config.trials)))

    labels = list(results[0].rates.keys())
    x = config.x_values
    stats: Dict[str, Tuple[List[float], List[float]]] = {}
    for label in labels:
        means, errs = [], []
        for ix in range(len(x)):
            m, e = aggregate([r.rates[label][ix] for r in results])
            means.append(m)
            errs.append(e)
        stats[label] = (means, errs)

    if config.normalize:
        ref = max((m for label in labels if _mode_of(label) != SIDE
                   for m in stats[label][0]), default=0.0)
        if ref > 0:
            for label in labels:
                if _mode_of(label) == SIDE:
                    continue
                means, errs = stats[label]
                stats[label] = ([m / ref for m in means], [e / ref for e in errs])

    curves = []
    for label in sorted(labels):
        if config.mode != BOTH and _mode_of(label) != config.mode:
            continue
        means, errs = stats[label]
        order = sorted(range(len(x)), key=lambda i: x[i])
        curves.append(Curve(
            label=label,
            x=tuple(x[i] for i in order),
            mean=tuple(means[i] for i in order),
            stderr=tuple(errs[i] for i in order),
            trials=config.trials,
        ))
    return CurveSet(config.scenario, config.seed, config_digest(config), tuple(curves))
