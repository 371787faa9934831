"""Front quality indicators and the statistics used to compare optimizers."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import ndtr
from scipy.stats import rankdata

from .errors import ContractError


def _as_front(points) -> np.ndarray:
    F = np.asarray(points, dtype=np.float64)
    if F.size == 0:
        return F.reshape(0, 2)
    return F.reshape(-1, F.shape[-1])


def nondominated(points) -> np.ndarray:
    """Distinct non-dominated rows of ``points``, sorted by first objective."""
    F = np.unique(_as_front(points), axis=0)
    if len(F) == 0:
        return F
    # rows are sorted by (f1, f2); a row survives if its f2 beats every earlier row
    prior_best = np.minimum.accumulate(np.concatenate([[np.inf], F[:-1, 1]]))
    return F[F[:, 1] < prior_best]


def pseudo_optimal_front(fronts) -> np.ndarray:
    """Non-dominated subset of the union of all given fronts."""
    arrays = [_as_front(f) for f in fronts]
    if not arrays or all(len(a) == 0 for a in arrays):
        raise ContractError("need at least one non-empty front")
    return nondominated(np.vstack([a for a in arrays if len(a)]))


def igd(reference, evaluated) -> float:
    """Mean Euclidean distance from each reference point to its nearest
    evaluated point."""
    R = _as_front(reference)
    S = _as_front(evaluated)
    if len(R) == 0 or len(S) == 0:
        raise ContractError("IGD needs two non-empty fronts")
    d = np.sqrt(((R[:, None, :] - S[None, :, :]) ** 2).sum(axis=2))
    return float(d.min(axis=1).mean())


def hypervolume_2d(front, ref, clip: bool = False) -> float:
    """Area dominated by ``front`` and bounded by ``ref`` (both minimised).

    Points beyond ``ref`` in any coordinate raise :class:`ContractError`
    unless ``clip`` is set, in which case they are ignored.
    """
    F = _as_front(front)
    ref = np.asarray(ref, dtype=np.float64)
    if len(F) == 0:
        return 0.0
    outside = np.any(F > ref, axis=1)
    if outside.any():
        if not clip:
            bad = F[np.argmax(outside)]
            raise ContractError(f"point {tuple(bad)} lies beyond reference point {tuple(ref)}")
        F = F[~outside]
    # sweep over f1 ascending; for ties keep the best f2
    F = F[np.lexsort((F[:, 1], F[:, 0]))]
    area = 0.0
    best_f2 = ref[1]
    for f1, f2 in F:
        if f2 < best_f2:
            area += (ref[0] - f1) * (best_f2 - f2)
            best_f2 = f2
    return float(area)


def reference_point(fronts, scale: float = 1.01, offset: float = 0.01) -> np.ndarray:
    """Componentwise maximum over all fronts, pushed slightly outward.

    Positive maxima are multiplied by ``scale``; a zero maximum gets ``offset``
    added so every point keeps a non-empty dominated box.
    """
    F = np.vstack([_as_front(f) for f in fronts if len(_as_front(f))])
    top = F.max(axis=0)
    return np.where(top > 0, top * scale, top + offset)


def normalize(value: float, vmin: float, vmax: float) -> float:
    if vmax < vmin:
        raise ContractError("vmax must be >= vmin")
    if not vmin <= value <= vmax:
        raise ContractError(f"value {value} outside [{vmin}, {vmax}]")
    if vmax == vmin:
        return 0.5
    return (value - vmin) / (vmax - vmin)


@dataclass
class RankSummary:
    ranks: np.ndarray  # optimizer x instance, 1 = best
    median: np.ndarray
    average: np.ndarray
    minimum: np.ndarray
    maximum: np.ndarray

    def to_dict(self) -> dict:
        return {k: np.asarray(v).tolist() for k, v in asdict(self).items()}


def rank_table(scores, direction: str = "minimize") -> RankSummary:
    """Rank optimizers (rows) on every instance (column) with average ranks for ties."""
    S = np.asarray(scores, dtype=np.float64)
    if S.ndim != 2 or S.size == 0 or np.isnan(S).any():
        raise ContractError("scores must be a complete optimizer x instance matrix")
    if direction not in ("minimize", "maximize"):
        raise ContractError(f"unknown direction {direction!r}")
    keyed = S if direction == "minimize" else -S
    ranks = np.column_stack([rankdata(keyed[:, j], method="average") for j in range(S.shape[1])])
    return RankSummary(
        ranks=ranks,
        median=np.median(ranks, axis=1),
        average=ranks.mean(axis=1),
        minimum=ranks.min(axis=1),
        maximum=ranks.max(axis=1),
    )


def joined_rank(igd_summary: RankSummary, hv_summary: RankSummary) -> np.ndarray:
    return (igd_summary.average + hv_summary.average) / 2


@dataclass
class WilcoxonReport:
    n: int
    w_plus: float
    w_minus: float
    statistic: float
    p_one_sided: float | None
    p_value: float | None
    method: str
    alpha: float
    significant: bool
    decision: str

    def to_dict(self) -> dict:
        return asdict(self)


def signed_ranks(x, y) -> np.ndarray:
    """Ranks of |x - y| (average ties), signed by the difference, zeros dropped."""
    d = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    d = d[d != 0]
    if len(d) == 0:
        return d
    return np.sign(d) * rankdata(np.abs(d), method="average")


def exact_lower_tail(ranks, w: float) -> float:
    """P(W+ <= w) over all 2^n equally likely sign assignments of ``ranks``.

    Ranks are doubled so tied (half-integer) ranks stay integral; the count
    of assignments reaching each sum is built up one rank at a time.
    """
    doubled = np.rint(2 * np.abs(np.asarray(ranks, dtype=np.float64))).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    limit = int(math.floor(2 * w + 1e-9))
    return float(counts[: limit + 1].sum() / 2.0 ** len(doubled))


def normal_lower_tail(ranks, w: float) -> float:
    """Normal approximation of P(W+ <= w) with tie and continuity corrections."""
    r = np.abs(np.asarray(ranks, dtype=np.float64))
    n = len(r)
    mean = n * (n + 1) / 4
    _, tie_counts = np.unique(r, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24 - (tie_counts**3 - tie_counts).sum() / 48
    if var <= 0:
        return 1.0
    return float(ndtr((w - mean + 0.5) / math.sqrt(var)))


def wilcoxon_signed_rank(x, y, alpha: float = 0.05, method: str = "auto") -> WilcoxonReport:
    """Two-sided paired Wilcoxon signed-rank test.

    ``method`` is ``"exact"``, ``"approx"`` or ``"auto"`` (exact for at most
    25 non-zero differences). ``p_one_sided`` is the lower-tail probability
    of the smaller of W+ and W-.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ContractError("x and y must be paired 1-D samples of equal length")
    if len(x) < 5:
        raise ContractError("the signed-rank test needs at least 5 pairs")
    sr = signed_ranks(x, y)
    n = len(sr)
    if n == 0:
        return WilcoxonReport(0, 0.0, 0.0, 0.0, None, None, "none", alpha, False, "no decision")
    w_plus = float(sr[sr > 0].sum())
    w_minus = float(-sr[sr < 0].sum())
    w = min(w_plus, w_minus)
    if method == "auto":
        method = "exact" if n <= 25 else "approx"
    if method == "exact":
        tail = exact_lower_tail(sr, w)
    elif method == "approx":
        tail = normal_lower_tail(sr, w)
    else:
        raise ContractError(f"unknown method {method!r}")
    p = min(1.0, 2 * tail)
    significant = p < alpha
    if not significant:
        decision = "no significant difference"
    else:
        decision = "x greater" if w_plus > w_minus else "y greater"
    return WilcoxonReport(n, w_plus, w_minus, w, tail, p, method, alpha, significant, decision)
