"""Average-case cost measurement for the decision procedures in this
package, with per-stratum breakdowns.

A task maps a word to (scalar cost, stratum label); the label names
which stage of a composite procedure decided (fast_check/whitehead,
tier1_abelianization/tier2_exact, ...).  The overall mean then always
decomposes exactly as sum(freq_j * mean_j) over strata, because both
sides are computed from the same per-trial costs.

Sampling is one substream per trial (substream(seed, i)), so records
are reproducible and trials could be farmed out in any order; per-trial
costs are sorted before aggregation so summaries do not depend on
completion order.  Quantiles are nearest-rank order statistics, std is
the population standard deviation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, sqrt
from typing import Callable

from .errors import BudgetExceeded
from .rng import substream
from .whitehead import fast_check, primitivity_composite, primitivity_whitehead
from .wordproblem import wp_composite
from .words import (
    SamplingModel,
    Word,
    count_all,
    count_cyclically_reduced,
    count_reduced,
    enumerate_words,
    sample_word,
)

DEFAULT_EXHAUSTIVE_BUDGET = 500_000


@dataclass(frozen=True)
class TaskSpec:
    run: Callable[[Word], tuple[int, str]]
    check: Callable[[int, int, SamplingModel], None]


def _any_setup(rank: int, n: int, model: SamplingModel) -> None:
    pass


def _fast_check_setup(rank: int, n: int, model: SamplingModel) -> None:
    if model is not SamplingModel.CYCLICALLY_REDUCED:
        raise ValueError(
            "fast_check_only needs the cyclic sampling model "
            "(the scan requires cyclically reduced input)"
        )
    if n <= 2:
        raise ValueError("fast_check_only needs word length > 2")


def _heisenberg_setup(rank: int, n: int, model: SamplingModel) -> None:
    if rank != 2:
        raise ValueError("wp_heisenberg needs rank 2")


def _run_composite(w: Word) -> tuple[int, str]:
    v = primitivity_composite(w)
    return v.cost.total(), v.decided_by


def _run_whitehead(w: Word) -> tuple[int, str]:
    v = primitivity_whitehead(w)
    return v.cost.total(), v.decided_by


def _run_fast_check(w: Word) -> tuple[int, str]:
    r = fast_check(w)
    return r.cost.total(), "not_primitive" if r.not_primitive else "inconclusive"


def _run_wp(group: str) -> Callable[[Word], tuple[int, str]]:
    def run(w: Word) -> tuple[int, str]:
        v = wp_composite(group, w)
        return v.cost.total(), v.decided_by
    return run


TASKS: dict[str, TaskSpec] = {
    "primitivity_composite": TaskSpec(_run_composite, _any_setup),
    "primitivity_whitehead_only": TaskSpec(_run_whitehead, _any_setup),
    "fast_check_only": TaskSpec(_run_fast_check, _fast_check_setup),
    "wp_free": TaskSpec(_run_wp("free"), _any_setup),
    "wp_abelian": TaskSpec(_run_wp("abelian"), _any_setup),
    "wp_heisenberg": TaskSpec(_run_wp("heisenberg"), _heisenberg_setup),
}


@dataclass(frozen=True)
class StratumStat:
    label: str
    freq: float
    mean_cost: float


@dataclass(frozen=True)
class BenchRecord:
    task: str
    model: str
    n: int
    trials: int
    seed: int
    mean_cost: float
    std_cost: float
    p50: int
    p95: int
    max_cost: int
    strata: tuple[StratumStat, ...]


def _nearest_rank(sorted_costs: list[int], q: float) -> int:
    idx = max(0, ceil(q * len(sorted_costs)) - 1)
    return sorted_costs[idx]


def avgcase_estimate(
    task: str,
    rank: int,
    n: int,
    model: SamplingModel,
    trials: int,
    seed: int,
) -> BenchRecord:
    """Monte Carlo estimate of the mean cost of a task over uniform
    length-n words under the model, with per-stratum frequency/mean."""
    spec = TASKS.get(task)
    if spec is None:
        raise ValueError(f"unknown task {task!r} (one of {sorted(TASKS)})")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    spec.check(rank, n, model)
    by_stratum: dict[str, list[int]] = {}
    costs = []
    for i in range(trials):
        w = sample_word(rank, n, model, substream(seed, i))
        cost, label = spec.run(w)
        costs.append(cost)
        by_stratum.setdefault(label, []).append(cost)
    costs.sort()
    mean = sum(costs) / trials
    var = sum((c - mean) ** 2 for c in costs) / trials
    strata = tuple(
        StratumStat(label, len(cs) / trials, sum(sorted(cs)) / len(cs))
        for label, cs in sorted(by_stratum.items())
    )
    return BenchRecord(
        task, model.key, n, trials, seed,
        mean, sqrt(var), _nearest_rank(costs, 0.50),
        _nearest_rank(costs, 0.95), costs[-1], strata,
    )


def exhaustive_average(
    task: str,
    rank: int,
    n: int,
    model: SamplingModel,
    budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
) -> Fraction:
    """Exact mean cost over every length-n word under the model (refuses
    when the word count exceeds the budget)."""
    spec = TASKS.get(task)
    if spec is None:
        raise ValueError(f"unknown task {task!r} (one of {sorted(TASKS)})")
    spec.check(rank, n, model)
    counts = {
        SamplingModel.ALL_WORDS: count_all,
        SamplingModel.REDUCED: count_reduced,
        SamplingModel.CYCLICALLY_REDUCED: count_cyclically_reduced,
    }
    total_words = counts[model](rank, n)
    if total_words > budget:
        raise BudgetExceeded(
            f"exhaustive average over {total_words} words exceeds budget {budget}"
        )
    total = 0
    for w in enumerate_words(rank, n, model, budget=budget):
        total += spec.run(w)[0]
    return Fraction(total, total_words)


CSV_HEADER = (
    "task,model,n,trials,seed,mean_cost,std_cost,p50,p95,max_cost,"
    "stratum,stratum_freq,stratum_mean"
)


def record_rows(rec: BenchRecord) -> list[dict[str, object]]:
    """One ALL row plus one row per stratum (labels sorted)."""
    base = {
        "task": rec.task, "model": rec.model, "n": rec.n,
        "trials": rec.trials, "seed": rec.seed,
        "mean_cost": rec.mean_cost, "std_cost": rec.std_cost,
        "p50": rec.p50, "p95": rec.p95, "max_cost": rec.max_cost,
    }
    rows = [dict(base, stratum="ALL", stratum_freq=1.0, stratum_mean=rec.mean_cost)]
    for s in rec.strata:
        rows.append(dict(base, stratum=s.label, stratum_freq=s.freq,
                         stratum_mean=s.mean_cost))
    return rows


def _cell(v: object) -> str:
    # repr for floats so equal runs are byte-identical and full precision
    return repr(v) if isinstance(v, float) else str(v)


def emit_csv(records, path: str) -> None:
    """Write records to path: fixed header, UTF-8, LF line endings,
    floats via repr, so identical inputs give byte-identical files."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for rec in records:
            for row in record_rows(rec):
                writer.writerow([_cell(row[k]) for k in CSV_HEADER.split(",")])
