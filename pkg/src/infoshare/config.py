"""Run configuration: the typed ``RunConfig`` and its JSON document form."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .attacks import AttackCatalogue, AttackScenarioSpec
from .errors import FormatError, ValidationError
from .game import SharingPolicy
from .network import DependencyNetwork, NetworkGenSpec, generate_scale_free, load_network


@dataclass(frozen=True)
class RunConfig:
    network: NetworkGenSpec | DependencyNetwork = field(default_factory=NetworkGenSpec)
    scenario: AttackScenarioSpec = field(default_factory=AttackScenarioSpec)
    sharing_policy: SharingPolicy | tuple[SharingPolicy, ...] = SharingPolicy("broadcast")
    catalogue_size: int = 10
    catalogue: AttackCatalogue | None = None
    epochs: int = 200
    simulations: int = 30
    master_seed: int = 0
    initial_cia: float = 0.8
    initial_trust: float = 0.5
    initial_reputation: float = 0.5
    k: float = 0.2
    k_reward: float = 0.3
    k_punish: float = 0.3
    record_matrices: bool = False

    def __post_init__(self) -> None:
        policy = self.sharing_policy
        if isinstance(policy, (list, tuple)):
            object.__setattr__(self, "sharing_policy", tuple(SharingPolicy.parse(p) for p in policy))
        else:
            object.__setattr__(self, "sharing_policy", SharingPolicy.parse(policy))
        for name in ("epochs", "simulations", "catalogue_size"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValidationError(name, f"must be a positive integer, got {value!r}")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise ValidationError("master_seed", "must be a 64-bit unsigned integer")
        for name in ("initial_cia", "initial_trust", "initial_reputation", "k", "k_reward", "k_punish"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
                raise ValidationError(name, f"must lie in [0, 1], got {value!r}")
        if self.catalogue is not None and self.catalogue.m != self.catalogue_size:
            raise ValidationError(
                "catalogue", f"has {self.catalogue.m} attacks but catalogue_size is {self.catalogue_size}"
            )
        if isinstance(self.sharing_policy, tuple) and isinstance(self.network, DependencyNetwork):
            if len(self.sharing_policy) != self.network.n:
                raise ValidationError("sharing_policy", "per-node policy list must have one entry per node")

    def build_network(self) -> DependencyNetwork:
        net = self.network if isinstance(self.network, DependencyNetwork) else generate_scale_free(self.network)
        if isinstance(self.sharing_policy, tuple) and len(self.sharing_policy) != net.n:
            raise ValidationError("sharing_policy", f"per-node policy list has {len(self.sharing_policy)} entries for {net.n} nodes")
        return net

    def policies(self, n: int) -> Sequence[SharingPolicy]:
        if isinstance(self.sharing_policy, tuple):
            return self.sharing_policy
        return [self.sharing_policy] * n

    @property
    def policy_label(self) -> str:
        if isinstance(self.sharing_policy, tuple):
            return "per_node"
        return self.sharing_policy.label

    def with_policy(self, policy: Any) -> RunConfig:
        return dataclasses.replace(self, sharing_policy=policy)

    def to_doc(self) -> dict[str, Any]:
        if isinstance(self.network, DependencyNetwork):
            network: dict[str, Any] = self.network.to_dict()
        else:
            network = {"generate": dataclasses.asdict(self.network)}
        scenario = dataclasses.asdict(self.scenario)
        scenario["strategy"] = self.scenario.strategy.value
        if isinstance(self.sharing_policy, tuple):
            policy: Any = [p.to_doc() for p in self.sharing_policy]
        else:
            policy = self.sharing_policy.to_doc()
        doc: dict[str, Any] = {
            "network": network,
            "scenario": scenario,
            "sharing_policy": policy,
            "catalogue_size": self.catalogue_size,
        }
        if self.catalogue is not None:
            doc["catalogue"] = self.catalogue.to_dict()
        for name in (
            "epochs", "simulations", "master_seed", "initial_cia", "initial_trust",
            "initial_reputation", "k", "k_reward", "k_punish", "record_matrices",
        ):
            doc[name] = getattr(self, name)
        return doc


_TOP_LEVEL = {f.name for f in dataclasses.fields(RunConfig)}


def config_from_doc(doc: Any, base_dir: Path | None = None) -> RunConfig:
    """Build a ``RunConfig`` from a decoded JSON document.

    Relative ``network.path`` / ``catalogue.path`` entries resolve against
    ``base_dir``.
    """
    if not isinstance(doc, dict):
        raise FormatError("configuration must be a JSON object")
    unknown = set(doc) - _TOP_LEVEL
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown configuration field")
    kwargs = dict(doc)
    base_dir = base_dir or Path.cwd()

    if "network" in kwargs:
        kwargs["network"] = _network_from_doc(kwargs["network"], base_dir)
    if "scenario" in kwargs:
        scen = kwargs["scenario"]
        if not isinstance(scen, dict):
            raise FormatError("'scenario' must be an object")
        try:
            kwargs["scenario"] = AttackScenarioSpec(**scen)
        except TypeError as exc:
            raise ValidationError("scenario", str(exc)) from None
    if kwargs.get("catalogue") is not None:
        cat = kwargs["catalogue"]
        if isinstance(cat, dict) and "path" in cat:
            kwargs["catalogue"] = AttackCatalogue.load(_resolve(cat["path"], base_dir))
        else:
            kwargs["catalogue"] = AttackCatalogue.from_dict(cat)
    return RunConfig(**kwargs)


def _network_from_doc(doc: Any, base_dir: Path) -> NetworkGenSpec | DependencyNetwork:
    if not isinstance(doc, dict):
        raise FormatError("'network' must be an object")
    if "generate" in doc:
        gen = doc["generate"]
        if not isinstance(gen, dict):
            raise FormatError("'network.generate' must be an object")
        try:
            return NetworkGenSpec(**gen)
        except TypeError as exc:
            raise ValidationError("network.generate", str(exc)) from None
    if "path" in doc:
        return load_network(_resolve(doc["path"], base_dir))
    return DependencyNetwork.from_dict(doc)


def _resolve(path: str, base_dir: Path) -> Path:
    p = Path(path)
    return p if p.is_absolute() else base_dir / p


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    return config_from_doc(doc, base_dir=path.parent)


def paper_config(strategy: str = "random", policy: Any = "broadcast", **overrides: Any) -> RunConfig:
    """Configuration matching the published experimental set-up."""
    return RunConfig(
        network=NetworkGenSpec(n=50, attach_count=2, edge_weight=0.5, seed=7),
        scenario=AttackScenarioSpec(strategy=strategy),
        sharing_policy=policy,
        **overrides,
    )
