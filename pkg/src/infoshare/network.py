"""Dependency networks: representation, scale-free generation and indirect services."""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .errors import FormatError, ValidationError


@dataclass(frozen=True, eq=False)
class DependencyNetwork:
    """Weighted directed dependency graph.

    ``A[i, j]`` is the level of service node ``i`` offers node ``j`` (so ``j``
    depends on ``i``).  Entries lie in ``[0, 1]`` and the diagonal is zero.
    """

    A: np.ndarray

    def __post_init__(self) -> None:
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError("A", f"adjacency must be square, got shape {A.shape}")
        if A.shape[0] < 1:
            raise ValidationError("n", "network needs at least one node")
        if not np.all(np.isfinite(A)) or A.min() < 0.0 or A.max() > 1.0:
            raise ValidationError("A", "service levels must lie in [0, 1]")
        if np.any(np.diag(A) != 0.0):
            raise ValidationError("A", "self-dependencies are not allowed (nonzero diagonal)")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DependencyNetwork):
            return NotImplemented
        return np.array_equal(self.A, other.A)

    def in_degree(self) -> np.ndarray:
        """Number of providers of each node (unweighted)."""
        return np.count_nonzero(self.A, axis=0)

    def out_degree(self) -> np.ndarray:
        """Number of dependents of each node (unweighted)."""
        return np.count_nonzero(self.A, axis=1)

    def edges(self) -> list[tuple[int, int, float]]:
        src, dst = np.nonzero(self.A)
        return [(int(i), int(j), float(self.A[i, j])) for i, j in zip(src, dst)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "edges": [{"from": i, "to": j, "weight": w} for i, j, w in self.edges()],
        }

    @classmethod
    def from_dict(cls, doc: Any) -> DependencyNetwork:
        if not isinstance(doc, dict):
            raise FormatError("network document must be an object")
        n = doc.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError("n", f"must be a positive integer, got {n!r}")
        edges = doc.get("edges", [])
        if not isinstance(edges, list):
            raise FormatError("'edges' must be a list")
        A = np.zeros((n, n))
        seen: set[tuple[int, int]] = set()
        for k, edge in enumerate(edges):
            where = f"edges[{k}]"
            if not isinstance(edge, dict) or not {"from", "to", "weight"} <= edge.keys():
                raise FormatError(f"{where}: expected keys 'from', 'to', 'weight'")
            i, j, w = edge["from"], edge["to"], edge["weight"]
            for name, idx in (("from", i), ("to", j)):
                if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < n:
                    raise ValidationError(f"{where}.{name}", f"node id {idx!r} out of range [0, {n})")
            if not isinstance(w, (int, float)) or isinstance(w, bool) or not 0.0 <= w <= 1.0:
                raise ValidationError(f"{where}.weight", f"weight {w!r} outside [0, 1]")
            if i == j:
                raise ValidationError(f"{where}", "self-dependencies are not allowed")
            if (i, j) in seen:
                raise ValidationError(f"{where}", f"duplicate edge {i}->{j}")
            seen.add((i, j))
            A[i, j] = float(w)
        return cls(A)


@dataclass(frozen=True)
class NetworkGenSpec:
    n: int = 50
    attach_count: int = 2
    edge_weight: float = 0.5
    seed: int = 7

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError("n", f"must be a positive integer, got {self.n!r}")
        if not isinstance(self.attach_count, int) or self.attach_count < 0:
            raise ValidationError("attach_count", f"must be a non-negative integer, got {self.attach_count!r}")
        if self.attach_count >= self.n:
            raise ValidationError("attach_count", f"must be smaller than n={self.n}")
        if not 0.0 < self.edge_weight <= 1.0:
            raise ValidationError("edge_weight", f"must lie in (0, 1], got {self.edge_weight!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValidationError("seed", "must be a 64-bit unsigned integer")


def generate_scale_free(spec: NetworkGenSpec) -> DependencyNetwork:
    """Preferential-attachment network with randomly oriented edges.

    Starts from a clique of ``attach_count + 1`` nodes; every later node links
    to ``attach_count`` distinct existing nodes chosen with probability
    proportional to their current total degree.
    """
    n, m = spec.n, spec.attach_count
    rng = np.random.default_rng(spec.seed)
    A = np.zeros((n, n))

    def link(u: int, v: int) -> None:
        if rng.random() < 0.5:
            u, v = v, u
        A[u, v] = spec.edge_weight

    degree = np.zeros(n)
    core = min(m + 1, n)
    for u in range(core):
        for v in range(u + 1, core):
            link(u, v)
            degree[u] += 1
            degree[v] += 1

    for new in range(core, n):
        if m == 0:
            break
        weights = degree[:new] / degree[:new].sum()
        targets = rng.choice(new, size=m, replace=False, p=weights)
        for t in sorted(int(x) for x in targets):
            link(new, t)
            degree[new] += 1
            degree[t] += 1

    return DependencyNetwork(A)


def compute_indirect_services(net: DependencyNetwork) -> np.ndarray:
    """Strongest direct-or-indirect service weight between every ordered pair.

    ``B[i, j]`` is the maximum, over simple directed paths ``i -> ... -> j``,
    of the product of edge weights (0 when unreachable, 0 on the diagonal).

    Weights are at most 1, so extending a path never increases its product;
    a max-product Dijkstra from each source therefore finds the optimum over
    all simple paths.  Products accumulate left to right along each path.
    """
    A = net.A
    n = net.n
    succ = [[(int(j), float(A[i, j])) for j in np.flatnonzero(A[i])] for i in range(n)]
    B = np.zeros((n, n))
    for src in range(n):
        best = np.zeros(n)
        done = np.zeros(n, dtype=bool)
        best[src] = 1.0
        heap = [(-1.0, src)]
        while heap:
            neg, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, w in succ[u]:
                cand = -neg * w
                if not done[v] and cand > best[v]:
                    best[v] = cand
                    heapq.heappush(heap, (-cand, v))
        best[src] = 0.0
        B[src] = best
    B.setflags(write=False)
    return B


def parse_network(text: str) -> DependencyNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    return DependencyNetwork.from_dict(doc)


def load_network(source: str | Path | dict) -> DependencyNetwork:
    """Load a network from a JSON file or an already-decoded document."""
    if isinstance(source, dict):
        return DependencyNetwork.from_dict(source)
    return parse_network(Path(source).read_text())


def dump_network(net: DependencyNetwork, path: str | Path) -> None:
    Path(path).write_text(json.dumps(net.to_dict(), indent=2) + "\n")


def degree_summary(net: DependencyNetwork) -> dict[str, float]:
    ind, outd = net.in_degree(), net.out_degree()
    return {
        "n": net.n,
        "edges": int(np.count_nonzero(net.A)),
        "max_in_degree": int(ind.max()),
        "median_in_degree": float(np.median(ind)),
        "max_out_degree": int(outd.max()),
        "median_out_degree": float(np.median(outd)),
        "max_total_degree": int((ind + outd).max()),
        "median_total_degree": float(np.median(ind + outd)),
    }
