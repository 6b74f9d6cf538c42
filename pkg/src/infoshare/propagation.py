"""Direct and propagated attack impacts, and post-attack immunization.

All functions read epoch-start snapshots and return new arrays; inputs are
never modified in place.
"""

from __future__ import annotations

import numpy as np

from .attacks import NO_ATTACK, AttackCatalogue


def impact_fractions(immun: np.ndarray, attacks: np.ndarray, catalogue: AttackCatalogue) -> np.ndarray:
    """Effective impact ``D[Y_i] * (1 - I[Y_i, i])`` per node, 0 where untargeted."""
    f = np.zeros(attacks.shape[0])
    hit = np.flatnonzero(attacks != NO_ATTACK)
    p = attacks[hit]
    f[hit] = catalogue.D[p] * (1.0 - immun[p, hit])
    return f


def apply_direct_impacts(
    values: np.ndarray,
    immun: np.ndarray,
    attacks: np.ndarray,
    catalogue: AttackCatalogue,
) -> tuple[np.ndarray, np.ndarray]:
    """Reduce each targeted node's value by its own effective impact.

    Returns the new values and the per-node impact fractions, which feed
    :func:`propagate_impacts`.
    """
    f = impact_fractions(immun, attacks, catalogue)
    return np.maximum(0.0, values - values * f), f


def propagate_impacts(
    values: np.ndarray,
    fractions: np.ndarray,
    B: np.ndarray,
    snapshot: np.ndarray | None = None,
) -> np.ndarray:
    """Spread related impacts to dependents through the indirect-service matrix.

    Every source ``i`` with fraction ``f_i`` removes ``snapshot[j] * f_i * B[i, j]``
    from each node ``j``; reductions from all sources are summed before the
    floor at zero is applied.  Receiver immunization plays no part.
    """
    if snapshot is None:
        snapshot = values
    reduction = snapshot * (fractions @ B)
    return np.maximum(0.0, values - reduction)


def immunize_attacked(immun: np.ndarray, attacks: np.ndarray) -> np.ndarray:
    out = immun.copy()
    hit = np.flatnonzero(attacks != NO_ATTACK)
    out[attacks[hit], hit] = 1.0
    return out
