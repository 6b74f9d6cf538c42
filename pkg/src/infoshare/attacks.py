"""Attack catalogue sampling and per-epoch target selection."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError
from .network import DependencyNetwork

NO_ATTACK = -1


class Strategy(str, enum.Enum):
    RANDOM = "random"
    IN_DEGREE = "in_degree"
    OUT_DEGREE = "out_degree"


@dataclass(frozen=True)
class AttackScenarioSpec:
    strategy: Strategy = Strategy.RANDOM
    active_fraction: float = 0.3
    target_fraction: float = 0.05
    floor_probability: float = 0.02
    impact_mean: float = 0.4
    impact_sd: float = 0.2
    impact_min: float = 0.2
    impact_max: float = 0.6

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        except ValueError:
            choices = ", ".join(s.value for s in Strategy)
            raise ValidationError("strategy", f"unknown strategy {self.strategy!r} (expected one of {choices})") from None
        for name in ("active_fraction", "target_fraction", "floor_probability", "impact_min", "impact_max", "impact_mean"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(name, f"must lie in [0, 1], got {value!r}")
        if self.impact_sd < 0:
            raise ValidationError("impact_sd", f"must be non-negative, got {self.impact_sd!r}")
        if not self.impact_min <= self.impact_mean <= self.impact_max:
            raise ValidationError("impact_mean", "requires impact_min <= impact_mean <= impact_max")


@dataclass(frozen=True, eq=False)
class AttackCatalogue:
    """Default impact ``D[p]`` for each of the ``m`` attack types."""

    D: np.ndarray

    def __post_init__(self) -> None:
        D = np.array(self.D, dtype=float).reshape(-1)
        if D.size < 1:
            raise ValidationError("impacts", "catalogue needs at least one attack")
        if not np.all(np.isfinite(D)) or D.min() < 0.0 or D.max() > 1.0:
            raise ValidationError("impacts", "default impacts must lie in [0, 1]")
        D.setflags(write=False)
        object.__setattr__(self, "D", D)

    @property
    def m(self) -> int:
        return self.D.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AttackCatalogue):
            return NotImplemented
        return np.array_equal(self.D, other.D)

    def to_dict(self) -> dict:
        return {"impacts": [float(x) for x in self.D]}

    @classmethod
    def from_dict(cls, doc: dict) -> AttackCatalogue:
        if not isinstance(doc, dict) or not isinstance(doc.get("impacts"), list):
            raise FormatError("catalogue document must be an object with an 'impacts' list")
        return cls(np.asarray(doc["impacts"], dtype=float))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> AttackCatalogue:
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
        return cls.from_dict(doc)


def sample_catalogue(spec: AttackScenarioSpec, m: int, rng: np.random.Generator) -> AttackCatalogue:
    """Draw ``m`` impacts from Normal(mean, sd), clamped to ``[impact_min, impact_max]``."""
    if m < 1:
        raise ValidationError("catalogue_size", f"must be positive, got {m!r}")
    raw = rng.normal(spec.impact_mean, spec.impact_sd, size=m)
    return AttackCatalogue(np.clip(raw, spec.impact_min, spec.impact_max))


def active_count(spec: AttackScenarioSpec, m: int) -> int:
    return min(m, math.ceil(spec.active_fraction * m))


def targeting_probabilities(net: DependencyNetwork, spec: AttackScenarioSpec) -> np.ndarray:
    """Per-node attack probability for the degree-proportional strategies."""
    if spec.strategy is Strategy.IN_DEGREE:
        degree = net.in_degree()
    elif spec.strategy is Strategy.OUT_DEGREE:
        degree = net.out_degree()
    else:
        raise ValueError("targeting probabilities only apply to degree-proportional strategies")
    return np.maximum(degree / net.n, spec.floor_probability)


def select_targets(
    net: DependencyNetwork,
    spec: AttackScenarioSpec,
    catalogue: AttackCatalogue,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw this epoch's attack vector.

    Returns an int array of length ``n``: the attack id hitting each node, or
    ``NO_ATTACK`` for untouched nodes.  Attack ids come from an active subset
    of ``ceil(active_fraction * m)`` attacks drawn without replacement.
    """
    n, m = net.n, catalogue.m
    Y = np.full(n, NO_ATTACK, dtype=np.int64)
    active = rng.choice(m, size=active_count(spec, m), replace=False)

    if spec.strategy is Strategy.RANDOM:
        k = min(n, math.ceil(spec.target_fraction * n))
        targets = np.sort(rng.choice(n, size=k, replace=False))
    else:
        p = targeting_probabilities(net, spec)
        targets = np.flatnonzero(rng.random(n) < p)

    if targets.size and active.size:
        Y[targets] = active[rng.integers(active.size, size=targets.size)]
    return Y
