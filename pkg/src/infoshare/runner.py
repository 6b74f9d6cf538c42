"""Epoch loop and Monte Carlo repetitions."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field

import numpy as np

from .attacks import NO_ATTACK, AttackCatalogue, sample_catalogue, select_targets
from .config import RunConfig
from .errors import ValidationError
from .game import audience_matrix, awareness_immunity, compute_awareness, decide_actions, mean_payoff, payoff_matrix
from .network import DependencyNetwork, compute_indirect_services
from .propagation import apply_direct_impacts, immunize_attacked, propagate_impacts
from .reputation import update_reputation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    values: np.ndarray
    attacks: np.ndarray
    shared_count: np.ndarray
    mean_payoff: np.ndarray
    awareness: np.ndarray  # rows of (receiver, sender, attack)
    q_in: np.ndarray
    q_out: np.ndarray
    reputation: np.ndarray | None = None
    actions: np.ndarray | None = None
    payoffs: np.ndarray | None = None
    immunization: np.ndarray | None = None


@dataclass
class SimulationTrace:
    """Per-epoch state of one simulation, stored as ``(epochs, n)`` arrays.

    Epoch ``t`` (1-based) lives at row ``t - 1``.  The full matrices
    (reputation, actions, payoffs, immunization) are only kept when the run
    was configured with ``record_matrices``.
    """

    index: int
    seed: int
    catalogue: AttackCatalogue
    values: np.ndarray
    attacks: np.ndarray
    shared_count: np.ndarray
    mean_payoff: np.ndarray
    q_in: np.ndarray
    q_out: np.ndarray
    cost_applied: np.ndarray
    awareness: np.ndarray  # rows of (epoch, receiver, sender, attack)
    reputation: np.ndarray | None = None
    actions: np.ndarray | None = None
    payoffs: np.ndarray | None = None
    immunization: np.ndarray | None = None

    @property
    def epochs(self) -> int:
        return self.values.shape[0]

    def record(self, epoch: int) -> EpochRecord:
        row = epoch - 1
        if not 0 <= row < self.epochs:
            raise IndexError(f"epoch {epoch} outside 1..{self.epochs}")
        extra = {
            name: None if getattr(self, name) is None else getattr(self, name)[row]
            for name in ("reputation", "actions", "payoffs", "immunization")
        }
        return EpochRecord(
            epoch=epoch,
            values=self.values[row],
            attacks=self.attacks[row],
            shared_count=self.shared_count[row],
            mean_payoff=self.mean_payoff[row],
            awareness=self.awareness[self.awareness[:, 0] == epoch, 1:],
            q_in=self.q_in[row],
            q_out=self.q_out[row],
            **extra,
        )

    def records(self):
        for t in range(1, self.epochs + 1):
            yield self.record(t)


@dataclass
class RunResult:
    config: RunConfig
    network: DependencyNetwork
    simulations: list[SimulationTrace] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.network.n

    @property
    def epochs(self) -> int:
        return self.config.epochs

    @property
    def seeds(self) -> list[int]:
        return [s.seed for s in self.simulations]

    def values(self) -> np.ndarray:
        """Stacked CIA values, shape ``(simulations, epochs, n)``."""
        return np.stack([s.values for s in self.simulations])

    def record_count(self) -> int:
        return sum(s.epochs for s in self.simulations)


def simulation_seed(master_seed: int, index: int) -> int:
    """64-bit seed for simulation ``index``, split from ``master_seed`` by counter."""
    state = np.random.SeedSequence(master_seed, spawn_key=(index,)).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def simulation_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent (catalogue, attack, auxiliary) generators for one simulation."""
    cat, atk, aux = np.random.SeedSequence(seed).spawn(3)
    return np.random.default_rng(cat), np.random.default_rng(atk), np.random.default_rng(aux)


def apply_sharing_costs(
    values: np.ndarray,
    actions: np.ndarray,
    attacks: np.ndarray,
    immun: np.ndarray,
    mean_payoffs: np.ndarray,
    costs: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Charge the sharing cost to nodes that shared at a loss.

    A node pays ``costs[i]`` when it was attacked this epoch, was not already
    immune to that attack (``immun`` is the epoch-start snapshot), shared
    with at least one node, and its mean payoff is negative.  Returns the new
    values and the boolean mask of charged nodes.
    """
    n = values.shape[0]
    attacked = attacks != NO_ATTACK
    fresh = np.zeros(n, dtype=bool)
    hit = np.flatnonzero(attacked)
    fresh[hit] = immun[attacks[hit], hit] < 1.0
    charged = attacked & fresh & actions.any(axis=1) & (mean_payoffs < 0.0)
    return np.where(charged, np.maximum(0.0, values - costs), values), charged


def _simulate(config: RunConfig, net: DependencyNetwork, B: np.ndarray, audience: np.ndarray, index: int) -> SimulationTrace:
    n, E = net.n, config.epochs
    seed = simulation_seed(config.master_seed, index)
    cat_rng, atk_rng, _aux_rng = simulation_streams(seed)
    catalogue = config.catalogue or sample_catalogue(config.scenario, config.catalogue_size, cat_rng)
    m = catalogue.m

    V = np.full(n, float(config.initial_cia))
    I = np.zeros((m, n))
    T = np.full((n, n), float(config.initial_trust))
    R = np.full((n, n), float(config.initial_reputation))
    np.fill_diagonal(R, 0.0)
    q_in = np.zeros(n, dtype=np.int64)
    q_out = np.zeros(n, dtype=np.int64)

    values = np.empty((E, n))
    attacks = np.empty((E, n), dtype=np.int64)
    shared = np.empty((E, n), dtype=np.int64)
    means = np.empty((E, n))
    qi = np.empty((E, n), dtype=np.int64)
    qo = np.empty((E, n), dtype=np.int64)
    charged_all = np.empty((E, n), dtype=bool)
    events: list[tuple[int, int, int, int]] = []
    full = config.record_matrices
    if full:
        reps = np.empty((E, n, n))
        acts = np.empty((E, n, n), dtype=bool)
        pays = np.empty((E, n, n))
        imms = np.empty((E, m, n))

    for row in range(E):
        epoch = row + 1
        V0, I0 = V, I
        C = config.k * V0

        Y = select_targets(net, config.scenario, catalogue, atk_rng)
        V, f = apply_direct_impacts(V0, I0, Y, catalogue)
        V = propagate_impacts(V, f, B, snapshot=V0)

        actions = decide_actions(None, net, Y, audience=audience)
        W = compute_awareness(actions, Y, I0)
        U = payoff_matrix(actions, R, W, T, C)
        mp = mean_payoff(U)

        V, charged = apply_sharing_costs(V, actions, Y, I0, mp, C)
        I = awareness_immunity(immunize_attacked(I0, Y), W, Y)
        R = update_reputation(R, W, actions, config.k_reward, config.k_punish)

        q_in += W.sum(axis=1)
        q_out += W.sum(axis=0)
        for a, b in zip(*np.nonzero(W)):
            events.append((epoch, int(a), int(b), int(Y[b])))

        values[row] = V
        attacks[row] = Y
        shared[row] = actions.sum(axis=1)
        means[row] = mp
        qi[row] = q_in
        qo[row] = q_out
        charged_all[row] = charged
        if full:
            reps[row], acts[row], pays[row], imms[row] = R, actions, U, I

    return SimulationTrace(
        index=index,
        seed=seed,
        catalogue=catalogue,
        values=values,
        attacks=attacks,
        shared_count=shared,
        mean_payoff=means,
        q_in=qi,
        q_out=qo,
        cost_applied=charged_all,
        awareness=np.array(events, dtype=np.int64).reshape(-1, 4),
        reputation=reps if full else None,
        actions=acts if full else None,
        payoffs=pays if full else None,
        immunization=imms if full else None,
    )


def run(config: RunConfig) -> RunResult:
    """Execute every simulation of ``config``; bit-identical for identical configs."""
    net = config.build_network()
    if config.catalogue is not None and config.catalogue.m != config.catalogue_size:
        raise ValidationError("catalogue", "size does not match catalogue_size")
    B = compute_indirect_services(net)
    audience = audience_matrix(config.policies(net.n), net)
    log.info("running %d simulations x %d epochs (n=%d, policy=%s, strategy=%s)",
             config.simulations, config.epochs, net.n, config.policy_label, config.scenario.strategy.value)
    sims = [_simulate(config, net, B, audience, s) for s in range(config.simulations)]
    return RunResult(config=config, network=net, simulations=sims)


def check_paired(configs: list[RunConfig]) -> None:
    """Raise unless the configs differ only in their sharing policy."""
    if not configs:
        raise ValidationError("configs", "need at least one configuration")
    base = configs[0]
    for k, cfg in enumerate(configs[1:], start=1):
        if dataclasses.replace(cfg, sharing_policy=base.sharing_policy) != base:
            diff = [
                f.name for f in dataclasses.fields(RunConfig)
                if f.name != "sharing_policy" and getattr(cfg, f.name) != getattr(base, f.name)
            ]
            raise ValidationError(f"configs[{k}]", f"differs from configs[0] in {', '.join(diff)}; only sharing_policy may vary")


def run_paired(configs: list[RunConfig]) -> list[RunResult]:
    """Run policy variants under common random numbers.

    Attack draws come from a stream that no policy-dependent step consumes,
    so every variant sees the same attack vectors in every simulation.
    """
    check_paired(configs)
    return [run(cfg) for cfg in configs]
