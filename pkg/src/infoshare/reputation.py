from __future__ import annotations

import numpy as np


def update_reputation(
    R: np.ndarray,
    W: np.ndarray,
    actions: np.ndarray,
    k_reward: float,
    k_punish: float,
) -> np.ndarray:
    """One round of reputation updates.

    ``R[i, j]`` is the reputation ``i`` receives from ``j``.  ``j`` rewards
    ``i`` when it gained awareness from ``i`` (``W[j, i]``), leaves it alone
    when ``i`` shared without telling it anything new, and punishes it when
    ``i`` did not share.  Results are clipped to ``[0, 1]``; the diagonal is
    left untouched.
    """
    useful = W.T > 0
    factor = np.where(useful, 1.0 + k_reward, np.where(actions, 1.0, 1.0 - k_punish))
    np.fill_diagonal(factor, 1.0)
    return np.clip(R * factor, 0.0, 1.0)
