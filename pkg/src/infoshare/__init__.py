"""Cyberattack propagation over dependency networks with an iterated information-sharing game."""

from .attacks import AttackCatalogue, AttackScenarioSpec, Strategy, sample_catalogue, select_targets
from .config import RunConfig, load_config, paper_config
from .errors import FormatError, InfoshareError, ValidationError
from .game import SharingPolicy, compute_awareness, decide_actions, mean_payoff, payoff, payoff_matrix
from .metrics import QualityReport, gain, mean_cia, quality_report
from .network import (
    DependencyNetwork,
    NetworkGenSpec,
    compute_indirect_services,
    generate_scale_free,
    load_network,
)
from .propagation import apply_direct_impacts, immunize_attacked, propagate_impacts
from .reputation import update_reputation
from .runner import RunResult, apply_sharing_costs, run, run_paired

__version__ = "0.1.0"

__all__ = [
    "AttackCatalogue",
    "AttackScenarioSpec",
    "DependencyNetwork",
    "FormatError",
    "InfoshareError",
    "NetworkGenSpec",
    "QualityReport",
    "RunConfig",
    "RunResult",
    "SharingPolicy",
    "Strategy",
    "ValidationError",
    "apply_direct_impacts",
    "apply_sharing_costs",
    "compute_awareness",
    "compute_indirect_services",
    "decide_actions",
    "gain",
    "generate_scale_free",
    "immunize_attacked",
    "load_config",
    "load_network",
    "mean_cia",
    "mean_payoff",
    "paper_config",
    "payoff",
    "payoff_matrix",
    "propagate_impacts",
    "quality_report",
    "run",
    "run_paired",
    "sample_catalogue",
    "select_targets",
    "update_reputation",
]
