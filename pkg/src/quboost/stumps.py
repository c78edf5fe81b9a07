"""Decision-stump dictionaries.

Order-1 stumps threshold a single coordinate, order-2 stumps threshold a
pairwise coordinate product; both come in positive and negative polarity:

    h(x) = scale * sign(polarity * x_l - theta)            (order 1)
    h(x) = scale * sign(polarity * x_i * x_j - theta)      (order 2)

with ``sign(0) = +1``. Each stump's threshold is fitted so that the stump
alone misclassifies as few training samples as possible. ``output_scale``
is a dictionary-level mode: 1 for 0-1-loss training, 1/N for quadratic-loss
training; fitting always happens on the raw +-1 decisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Literal

import numpy as np

__all__ = [
    "StumpSpec",
    "Dictionary",
    "evaluate_stump",
    "fit_threshold",
    "build_dictionary",
    "dictionary_size",
    "misclassification_count",
]

ScaleMode = Literal["unit", "one_over_N"]


@dataclass(frozen=True)
class StumpSpec:
    order: int                 # 1 or 2
    polarity: int              # +1 or -1
    indices: tuple[int, ...]   # (l,) for order 1, (i, j) with i < j for order 2
    threshold: float
    output_scale: float = 1.0

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if self.polarity not in (-1, 1):
            raise ValueError(f"polarity must be +-1, got {self.polarity}")
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) != self.order:
            raise ValueError(f"order {self.order} needs {self.order} indices")
        if self.order == 2 and not idx[0] < idx[1]:
            raise ValueError(f"order-2 indices must satisfy i < j, got {idx}")
        if min(idx) < 0:
            raise ValueError(f"negative feature index in {idx}")

    def projection(self, x: np.ndarray) -> float:
        """The signed quantity compared against the threshold."""
        if self.order == 1:
            return self.polarity * float(x[self.indices[0]])
        i, j = self.indices
        return self.polarity * float(x[i]) * float(x[j])

    def sort_key(self):
        # canonical dictionary order: order, then '+' before '-', then indices
        return (self.order, 0 if self.polarity > 0 else 1, self.indices)


def evaluate_stump(stump: StumpSpec, x) -> float:
    """Stump response in {-scale, +scale} for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if max(stump.indices) >= x.shape[0]:
        raise ValueError(
            f"stump indices {stump.indices} out of range for dimension {x.shape[0]}"
        )
    z = stump.projection(x)
    return stump.output_scale if z >= stump.threshold else -stump.output_scale


def _threshold_candidates(values: np.ndarray) -> np.ndarray:
    """Midpoints of consecutive sorted distinct values plus two sentinels.

    The sentinels sit strictly below the minimum and strictly above the
    maximum, so the constant +1 and constant -1 classifiers are always
    available candidates.
    """
    u = np.unique(values)
    mids = (u[:-1] + u[1:]) / 2.0
    return np.concatenate(([u[0] - 1.0], mids, [u[-1] + 1.0]))


def _best_threshold(projections: np.ndarray, y: np.ndarray) -> tuple[float, int]:
    """Smallest-error candidate threshold; ties go to the smallest value.

    A sample is predicted +1 when its projection is >= theta (the
    ``sign(0) = +1`` convention), so the error count at theta is
    ``#{y=+1, z < theta} + #{y=-1, z >= theta}``.
    """
    order = np.argsort(projections, kind="stable")
    z_sorted = projections[order]
    pos_sorted = (y[order] == 1).astype(np.int64)
    pos_prefix = np.concatenate(([0], np.cumsum(pos_sorted)))
    total_neg = int(np.sum(y == -1))

    candidates = _threshold_candidates(projections)
    idx = np.searchsorted(z_sorted, candidates, side="left")
    neg_prefix = idx - pos_prefix[idx]
    errors = pos_prefix[idx] + (total_neg - neg_prefix)
    best = int(np.argmin(errors))  # first minimum == smallest candidate theta
    return float(candidates[best]), int(errors[best])


def fit_threshold(order: int, polarity: int, indices, data) -> float:
    """Fitted threshold for one stump family on a dataset."""
    probe = StumpSpec(order, polarity, tuple(indices), threshold=0.0)
    z = _family_projections(probe, data.X)
    theta, _ = _best_threshold(z, data.y)
    return theta


def _family_projections(stump: StumpSpec, X: np.ndarray) -> np.ndarray:
    if max(stump.indices) >= X.shape[1]:
        raise ValueError(
            f"stump indices {stump.indices} out of range for dimension {X.shape[1]}"
        )
    if stump.order == 1:
        return stump.polarity * X[:, stump.indices[0]]
    i, j = stump.indices
    return stump.polarity * X[:, i] * X[:, j]


def misclassification_count(stump: StumpSpec, data) -> int:
    """Errors of the stump alone on ``data`` (scale-independent)."""
    z = _family_projections(stump, data.X)
    pred = np.where(z >= stump.threshold, 1, -1)
    return int(np.count_nonzero(pred != data.y))


def dictionary_size(dimension: int, order_level: int) -> int:
    """Closed-form stump count: 2M for order 1, 2M + 2*C(M,2) for order 2."""
    if order_level == 1:
        return 2 * dimension
    return 2 * dimension + dimension * (dimension - 1)


@dataclass(frozen=True)
class Dictionary:
    """All stumps of the requested orders, in canonical order, with fitted
    thresholds and a common output scale."""

    stumps: tuple[StumpSpec, ...]
    dimension: int
    order_level: int
    scale_mode: ScaleMode = "unit"

    @property
    def size(self) -> int:
        return len(self.stumps)

    @property
    def output_scale(self) -> float:
        return self.stumps[0].output_scale if self.stumps else 1.0

    def evaluate_vector(self, x: np.ndarray) -> np.ndarray:
        """Responses of all stumps on one feature vector, shape (N,)."""
        x = np.asarray(x, dtype=np.float64)
        return self.evaluate_matrix(x[None, :])[0]

    def evaluate_matrix(self, X: np.ndarray) -> np.ndarray:
        """Responses of all stumps on a feature matrix, shape (S, N)."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.dimension:
            raise ValueError(
                f"expected feature matrix with {self.dimension} columns, "
                f"got shape {X.shape}"
            )
        P = np.empty((X.shape[0], self.size))
        thetas = np.empty(self.size)
        for k, stump in enumerate(self.stumps):
            P[:, k] = _family_projections(stump, X)
            thetas[k] = stump.threshold
        scale = self.output_scale
        return np.where(P >= thetas[None, :], scale, -scale)

    def rescaled(self, scale_mode: ScaleMode) -> "Dictionary":
        """Same stumps and thresholds under the other output-scale mode."""
        if scale_mode == self.scale_mode:
            return self
        scale = 1.0 if scale_mode == "unit" else 1.0 / self.size
        stumps = tuple(
            StumpSpec(s.order, s.polarity, s.indices, s.threshold, scale)
            for s in self.stumps
        )
        return Dictionary(stumps, self.dimension, self.order_level, scale_mode)

    def to_json_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "order_level": self.order_level,
            "scale_mode": self.scale_mode,
            "stumps": [
                {
                    "order": s.order,
                    "polarity": s.polarity,
                    "indices": list(s.indices),
                    "threshold": float(s.threshold),
                }
                for s in self.stumps
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Dictionary":
        scale_mode = doc["scale_mode"]
        n = len(doc["stumps"])
        scale = 1.0 if scale_mode == "unit" else 1.0 / n
        stumps = tuple(
            StumpSpec(s["order"], s["polarity"], tuple(s["indices"]),
                      float(s["threshold"]), scale)
            for s in doc["stumps"]
        )
        return cls(stumps, int(doc["dimension"]), int(doc["order_level"]), scale_mode)


def _families(dimension: int, order_level: int):
    """Stump families in canonical order (order, '+', then '-', then indices)."""
    for polarity in (1, -1):
        for l in range(dimension):
            yield 1, polarity, (l,)
    if order_level == 2:
        for polarity in (1, -1):
            for i, j in combinations(range(dimension), 2):
                yield 2, polarity, (i, j)


def build_dictionary(data, order_level: int, scale_mode: ScaleMode = "unit") -> Dictionary:
    """Fit thresholds for every stump family of the requested order level.

    Threshold fitting across families is independent; this loops in the
    canonical family order so the result is deterministic.
    """
    if order_level not in (1, 2):
        raise ValueError(f"order_level must be 1 or 2, got {order_level}")
    M = data.dimension
    if order_level == 2 and M < 2:
        raise ValueError("order-2 stumps need dimensionality >= 2")

    n = dictionary_size(M, order_level)
    scale = 1.0 if scale_mode == "unit" else 1.0 / n
    stumps = []
    for order, polarity, indices in _families(M, order_level):
        probe = StumpSpec(order, polarity, indices, threshold=0.0)
        z = _family_projections(probe, data.X)
        theta, _ = _best_threshold(z, data.y)
        stumps.append(StumpSpec(order, polarity, indices, theta, scale))
    return Dictionary(tuple(stumps), M, order_level, scale_mode)
