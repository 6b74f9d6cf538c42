"""Canned experiment grids built from the core runner."""

from __future__ import annotations

from dataclasses import replace
from typing import Any

import numpy as np

from .config import RunConfig
from .metrics import critical_node_medians, gain, mean_cia, quality_report, relative_improvement
from .runner import run_paired

POLICIES: tuple[Any, ...] = ("none", {"top_deps": 0.1}, "all_deps", "broadcast")
STRATEGIES = ("random", "in_degree", "out_degree")


def policy_sweep(base: RunConfig, policies=POLICIES) -> dict[str, np.ndarray]:
    """MeanCIA series for each policy, all runs sharing attack streams."""
    configs = [base.with_policy(p) for p in policies]
    results = run_paired(configs)
    return {cfg.policy_label: mean_cia(r) for cfg, r in zip(configs, results)}


def welfare_table(base: RunConfig, strategies=STRATEGIES, policies=POLICIES) -> list[dict]:
    """Final MeanCIA and relative improvement over no-share for every scenario/policy cell."""
    rows = []
    for strategy in strategies:
        cfg = with_strategy(base, strategy)
        series = policy_sweep(cfg, policies)
        baseline = series["none"]
        for label, s in series.items():
            rows.append({
                "strategy": strategy,
                "policy": label,
                "final_mean_cia": float(s[-1]),
                "improvement": relative_improvement(s, baseline),
            })
    return rows


def with_strategy(base: RunConfig, strategy: str) -> RunConfig:
    return replace(base, scenario=replace(base.scenario, strategy=strategy))


def critical_nodes(base: RunConfig, t: int | None = None) -> dict[str, Any]:
    """Broadcast-vs-no-share gain at ``t`` joined with information-quality counters."""
    t = t or base.epochs
    quiet, loud = run_paired([base.with_policy("none"), base.with_policy("broadcast")])
    g = gain(quiet, loud, t)
    report = quality_report(loud, g)
    losers, winners = critical_node_medians(report)
    return {"epoch": t, "report": report, "median_balance_nongain": losers, "median_balance_gain": winners}
