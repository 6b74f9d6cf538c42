"""Welfare, gain and information-quality metrics over run results."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .runner import RunResult, check_paired


def mean_cia(result: RunResult) -> np.ndarray:
    """Average CIA value over nodes and simulations, one entry per epoch."""
    if not result.simulations:
        raise ValidationError("result", "run result holds no simulations")
    return result.values().mean(axis=2).mean(axis=0)


def relative_improvement(policy_series: np.ndarray, baseline_series: np.ndarray, t: int | None = None) -> float:
    """``(policy - baseline) / baseline`` at epoch ``t`` (default: last epoch)."""
    row = -1 if t is None else t - 1
    base = float(baseline_series[row])
    if base == 0.0:
        return float("inf") if policy_series[row] > 0 else 0.0
    return (float(policy_series[row]) - base) / base


def assert_paired(a: RunResult, b: RunResult) -> None:
    check_paired([a.config, b.config])
    if a.network != b.network or len(a.simulations) != len(b.simulations):
        raise ValidationError("results", "results were not produced on the same network")
    for sa, sb in zip(a.simulations, b.simulations):
        if not np.array_equal(sa.attacks, sb.attacks):
            raise ValidationError("results", f"simulation {sa.index} saw different attack vectors")


def gain(result_not_sharing: RunResult, result_sharing: RunResult, t: int) -> np.ndarray:
    """Per-node CIA difference (sharing minus not sharing) at epoch ``t``, averaged over simulations."""
    return gain_per_simulation(result_not_sharing, result_sharing, t).mean(axis=0)


@dataclass(frozen=True)
class QualityReport:
    """Useful-information counters per node joined with the sign of its gain.

    Counters are summed over all simulations of the sharing run.
    """

    q_in: np.ndarray
    q_out: np.ndarray
    gains: np.ndarray

    @property
    def gained(self) -> np.ndarray:
        return self.gains > 0

    @property
    def balance(self) -> np.ndarray:
        """Pieces sent minus pieces received."""
        return self.q_out - self.q_in

    def rows(self) -> list[dict]:
        return [
            {
                "node": i,
                "q_in": int(self.q_in[i]),
                "q_out": int(self.q_out[i]),
                "gain": float(self.gains[i]),
                "gained": bool(self.gained[i]),
            }
            for i in range(self.q_in.size)
        ]


def quality_report(result_sharing: RunResult, gains: np.ndarray) -> QualityReport:
    if not result_sharing.simulations:
        raise ValidationError("result", "run result holds no simulations")
    q_in = sum(s.q_in[-1] for s in result_sharing.simulations)
    q_out = sum(s.q_out[-1] for s in result_sharing.simulations)
    return QualityReport(q_in=np.asarray(q_in, dtype=np.int64), q_out=np.asarray(q_out, dtype=np.int64), gains=np.asarray(gains, dtype=float))


def critical_node_medians(report: QualityReport) -> tuple[float, float]:
    """Median ``Q_out - Q_in`` for non-gaining and gaining nodes (NaN for an empty group)."""
    bal = report.balance
    losers = bal[~report.gained]
    winners = bal[report.gained]
    return (
        float(np.median(losers)) if losers.size else float("nan"),
        float(np.median(winners)) if winners.size else float("nan"),
    )


def gain_per_simulation(result_not_sharing: RunResult, result_sharing: RunResult, t: int) -> np.ndarray:
    """Unaveraged gains, shape ``(simulations, n)``."""
    assert_paired(result_not_sharing, result_sharing)
    if not 1 <= t <= result_sharing.epochs:
        raise ValidationError("epoch", f"must lie in 1..{result_sharing.epochs}, got {t}")
    return result_sharing.values()[:, t - 1, :] - result_not_sharing.values()[:, t - 1, :]


def pooled_balance_medians(result_not_sharing: RunResult, result_sharing: RunResult, t: int) -> tuple[float, float, int]:
    """Critical-node medians over every (node, simulation) observation.

    Returns the median ``Q_out - Q_in`` (cumulative up to ``t``) of
    observations that did not gain, of those that did, and the number of
    non-gaining observations.
    """
    g = gain_per_simulation(result_not_sharing, result_sharing, t)
    bal = np.stack([s.q_out[t - 1] - s.q_in[t - 1] for s in result_sharing.simulations])
    lost = g <= 0
    return (
        float(np.median(bal[lost])) if lost.any() else float("nan"),
        float(np.median(bal[~lost])) if (~lost).any() else float("nan"),
        int(lost.sum()),
    )
