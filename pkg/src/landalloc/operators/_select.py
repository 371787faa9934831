import numpy as np


def weighted_index(weights: np.ndarray, rng: np.random.Generator) -> int:
    """Index drawn with probability proportional to ``weights``.

    All-zero weights fall back to a uniform draw.
    """
    n = len(weights)
    cum = np.cumsum(weights, dtype=np.float64)
    total = cum[-1]
    if total <= 0:
        return int(rng.integers(n))
    idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
    return min(idx, n - 1)
