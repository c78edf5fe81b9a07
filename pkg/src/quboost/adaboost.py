"""Discrete AdaBoost over a fixed stump dictionary (the greedy baseline).

Each round picks the stump with the smallest weighted error (ties to the
lowest stump index), weighs it by ``alpha = 0.5 ln((1 - eps) / eps)`` and
reweights the samples multiplicatively. A round with eps = 0 is included
with a capped alpha (eps clamped to 1/(2S)) and stops training, since no
later round can improve on a perfect stump; a round with eps >= 0.5 stops
before inclusion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, StrongClassifier, WeightAssignment
from .stumps import Dictionary

__all__ = ["BoostModel", "train_adaboost", "predict_adaboost"]


@dataclass(frozen=True)
class BoostModel:
    """Rounds of (stump index, alpha) plus the dictionary they refer to.

    ``round_errors`` keeps each round's weighted error, which is what the
    classical exponential training-error bound is made of.
    """

    dictionary: Dictionary
    rounds: tuple[tuple[int, float], ...]
    round_errors: tuple[float, ...] = field(default=())

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    def alpha_sums(self) -> np.ndarray:
        """Total alpha per dictionary stump (the derived weight vector)."""
        w = np.zeros(self.dictionary.size)
        for index, alpha in self.rounds:
            w[index] += alpha
        return w

    def num_distinct_stumps(self) -> int:
        return len({index for index, _ in self.rounds})

    def truncated(self, num_rounds: int) -> "BoostModel":
        return BoostModel(self.dictionary, self.rounds[:num_rounds],
                          self.round_errors[:num_rounds])

    def error_bound(self) -> float:
        """Classical bound on the training error rate:
        prod_t 2 sqrt(eps_t (1 - eps_t))."""
        bound = 1.0
        for eps in self.round_errors:
            bound *= 2.0 * math.sqrt(eps * (1.0 - eps))
        return bound

    def to_strong_classifier(self) -> StrongClassifier:
        """Equivalent thresholded ensemble (alpha sums normalized to total
        one, decision threshold 0); predictions are unchanged because the
        sign is invariant under positive rescaling."""
        w = self.alpha_sums()
        total = float(w.sum())
        values = w / total if total > 0 else w
        return StrongClassifier(self.dictionary,
                                WeightAssignment.from_values(values),
                                decision_threshold=0.0,
                                metadata={"method": "adaboost",
                                          "rounds": self.num_rounds})


def train_adaboost(data: Dataset, dictionary: Dictionary,
                   num_rounds: int) -> BoostModel:
    if dictionary.size == 0:
        raise ValueError("cannot boost over an empty dictionary")
    if dictionary.output_scale != 1.0:
        raise ValueError("boosting expects the dictionary at unit output scale")
    if num_rounds < 1:
        raise ValueError("num_rounds must be >= 1")

    S = data.size
    responses = dictionary.evaluate_matrix(data.X)        # (S, N) of +-1
    mistakes = (responses != data.y[:, None]).astype(np.float64)
    weights = np.full(S, 1.0 / S)

    rounds: list[tuple[int, float]] = []
    errors: list[float] = []
    for _ in range(num_rounds):
        eps_all = weights @ mistakes
        best = int(np.argmin(eps_all))                    # ties: lowest index
        eps = float(eps_all[best])
        if eps >= 0.5:
            break
        if eps == 0.0:
            eps_min = 1.0 / (2.0 * S)
            rounds.append((best, 0.5 * math.log((1.0 - eps_min) / eps_min)))
            errors.append(eps)
            break
        alpha = 0.5 * math.log((1.0 - eps) / eps)
        rounds.append((best, alpha))
        errors.append(eps)
        weights = weights * np.exp(-alpha * data.y * responses[:, best])
        weights /= weights.sum()

    return BoostModel(dictionary, tuple(rounds), tuple(errors))


def predict_adaboost(model: BoostModel, x) -> int:
    """Label ``sign(sum_t alpha_t h_t(x))`` with ``sign(0) = +1``."""
    responses = model.dictionary.evaluate_vector(np.asarray(x, dtype=np.float64))
    score = sum(alpha * responses[index] for index, alpha in model.rounds)
    return 1 if score >= 0 else -1
