"""Pairwise information-sharing game: policies, awareness and payoffs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .attacks import NO_ATTACK
from .errors import ValidationError
from .network import DependencyNetwork

TRUST_FLOOR = 1e-6

SHARE = True
NOT_SHARE = False


@dataclass(frozen=True)
class SharingPolicy:
    """Audience rule applied by an attacked node.

    ``kind`` is one of ``none``, ``top_deps``, ``all_deps`` or ``broadcast``;
    ``fraction`` is only meaningful for ``top_deps``.
    """

    kind: str
    fraction: float | None = None

    KINDS = ("none", "top_deps", "all_deps", "broadcast")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValidationError("sharing_policy", f"unknown policy {self.kind!r}")
        if self.kind == "top_deps":
            if self.fraction is None or not 0.0 < self.fraction <= 1.0:
                raise ValidationError("sharing_policy.top_deps", f"fraction must lie in (0, 1], got {self.fraction!r}")
        elif self.fraction is not None:
            raise ValidationError("sharing_policy", f"policy {self.kind!r} takes no fraction")

    @classmethod
    def parse(cls, doc: Any) -> SharingPolicy:
        """Accept ``"none" | {"top_deps": q} | "all_deps" | "broadcast"``."""
        if isinstance(doc, SharingPolicy):
            return doc
        if isinstance(doc, str):
            return cls(doc)
        if isinstance(doc, dict) and len(doc) == 1 and "top_deps" in doc:
            q = doc["top_deps"]
            if not isinstance(q, (int, float)) or isinstance(q, bool):
                raise ValidationError("sharing_policy.top_deps", f"fraction must be a number, got {q!r}")
            return cls("top_deps", float(q))
        raise ValidationError("sharing_policy", f"unrecognised policy document {doc!r}")

    def to_doc(self) -> Any:
        return {"top_deps": self.fraction} if self.kind == "top_deps" else self.kind

    @property
    def label(self) -> str:
        return f"top_deps_{self.fraction:g}" if self.kind == "top_deps" else self.kind

    def audience(self, net: DependencyNetwork, i: int) -> np.ndarray:
        """Nodes that ``i`` shares with when it is attacked."""
        n = net.n
        if self.kind == "none":
            return np.empty(0, dtype=np.int64)
        if self.kind == "broadcast":
            return np.array([j for j in range(n) if j != i], dtype=np.int64)
        providers = np.flatnonzero(net.A[:, i] > 0)
        if self.kind == "all_deps" or providers.size == 0:
            return providers
        k = math.ceil(self.fraction * providers.size)
        # stable sort on descending weight keeps lower ids first among ties
        order = np.argsort(-net.A[providers, i], kind="stable")
        return np.sort(providers[order[:k]])


def audience_matrix(policies: Sequence[SharingPolicy], net: DependencyNetwork) -> np.ndarray:
    """Boolean ``n x n`` matrix: row ``i`` marks who ``i`` would share with."""
    n = net.n
    M = np.zeros((n, n), dtype=bool)
    for i, policy in enumerate(policies):
        M[i, policy.audience(net, i)] = True
    return M


def decide_actions(
    policies: SharingPolicy | Sequence[SharingPolicy],
    net: DependencyNetwork,
    attacks: np.ndarray,
    audience: np.ndarray | None = None,
) -> np.ndarray:
    """Action matrix: ``actions[i, j]`` is True when ``i`` shares with ``j``.

    Only nodes attacked this epoch share; everyone else plays NotShare.
    ``audience`` may be precomputed with :func:`audience_matrix`.
    """
    if audience is None:
        if isinstance(policies, SharingPolicy):
            policies = [policies] * net.n
        audience = audience_matrix(policies, net)
    attacked = attacks != NO_ATTACK
    return audience & attacked[:, None]


def compute_awareness(actions: np.ndarray, attacks: np.ndarray, immun: np.ndarray) -> np.ndarray:
    """``W[a, b] = 1`` iff ``b`` is attacked, shared with ``a``, and ``a`` was not immune.

    ``immun`` is the epoch-start snapshot.
    """
    n = attacks.shape[0]
    W = np.zeros((n, n), dtype=np.int8)
    sharers = np.flatnonzero(attacks != NO_ATTACK)
    for b in sharers:
        receivers = np.flatnonzero(actions[b])
        gained = receivers[immun[attacks[b], receivers] < 1.0]
        W[gained, b] = 1
    return W


def awareness_immunity(immun: np.ndarray, W: np.ndarray, attacks: np.ndarray) -> np.ndarray:
    """Immunization matrix after receivers learn of the attacks they were told about."""
    out = immun.copy()
    recv, src = np.nonzero(W)
    out[attacks[src], recv] = 1.0
    return out


def payoff(
    share_a: bool,
    share_b: bool,
    R_ab: float,
    R_ba: float,
    W_ab: float,
    W_ba: float,
    T_ab: float,
    T_ba: float,
    C_a: float,
    C_b: float,
) -> tuple[float, float]:
    """Utilities ``(U_A, U_B)`` of one two-player game.

    ``R_ab`` is the reputation A receives from B, ``W_ab`` the awareness A
    gains from B, ``T_ab`` A's trust in B.
    """
    return (
        _utility(share_a, share_b, R_ab, W_ab, T_ab, C_a),
        _utility(share_b, share_a, R_ba, W_ba, T_ba, C_b),
    )


def _utility(own: bool, other: bool, R: float, W: float, T: float, C: float) -> float:
    if own and other:
        return (R + W) - C / max(T, TRUST_FLOOR)
    if own:
        return R - C / max(T, TRUST_FLOOR)
    if other:
        return (C + W) - R
    return C - (R + W)


def payoff_matrix(actions: np.ndarray, R: np.ndarray, W: np.ndarray, T: np.ndarray, C: np.ndarray) -> np.ndarray:
    """All utilities for the epoch at once.

    ``U[a, b]`` is what ``a`` earns in its game against ``b``; every unordered
    pair plays one game, so the off-diagonal holds ``n * (n - 1)`` utilities.
    The diagonal is NaN.
    """
    own = actions
    other = actions.T
    Ca = C[:, None]
    cost = Ca / np.maximum(T, TRUST_FLOOR)
    U = np.where(
        own,
        np.where(other, (R + W) - cost, R - cost),
        np.where(other, (Ca + W) - R, Ca - (R + W)),
    ).astype(float)
    np.fill_diagonal(U, np.nan)
    return U


def mean_payoff(U: np.ndarray, i: int | None = None) -> np.ndarray | float:
    """Mean utility over the games each node played; 0 for a node with none."""
    n = U.shape[0]
    if n <= 1:
        means = np.zeros(n)
    else:
        means = np.nansum(U, axis=1) / (n - 1)
    return means if i is None else float(means[i])
