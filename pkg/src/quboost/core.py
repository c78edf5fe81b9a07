"""Shared domain types and strong-classifier prediction.

Conventions used throughout the package:

* labels live in {-1, +1},
* ``sign(0) = +1`` everywhere a sign decision is made,
* feature vectors are 2-norm normalized at ingestion, so downstream code
  may assume unit norm,
* fixed-point weights with bit depth ``d`` decode as
  ``value = sum_b 2**b * bit_b / (2**d - 1)``, which maps onto [0, 1] with
  both endpoints attainable.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import stumps as _stumps

__all__ = [
    "Sample",
    "Dataset",
    "WeightAssignment",
    "StrongClassifier",
    "sign",
    "normalize_features",
    "predict",
    "margin",
]

_NORM_TOL = 1e-9


def sign(value):
    """Sign with the package-wide convention ``sign(0) = +1``."""
    return 1 if value >= 0 else -1


def normalize_features(features) -> np.ndarray:
    """Return a unit 2-norm copy of ``features``; zero vectors are rejected."""
    x = np.asarray(features, dtype=np.float64)
    norm = float(np.linalg.norm(x))
    if norm <= _NORM_TOL:
        raise ValueError("cannot normalize a (near-)zero feature vector")
    out = x / norm
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Sample:
    """One labeled example: unit-norm features and a label in {-1, +1}."""

    features: np.ndarray
    label: int

    def __post_init__(self):
        x = np.asarray(self.features, dtype=np.float64)
        object.__setattr__(self, "features", x)
        if self.label not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {self.label!r}")


@dataclass(frozen=True)
class Dataset:
    """A list of samples sharing one dimensionality.

    ``X`` is the stacked (S, M) feature matrix and ``y`` the label vector;
    both are read-only views shared by all consumers.
    """

    samples: tuple[Sample, ...]
    dimension: int = field(init=False)
    X: np.ndarray = field(init=False, repr=False)
    y: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        samples = tuple(self.samples)
        if not samples:
            raise ValueError("a dataset needs at least one sample")
        dims = {s.features.shape[0] for s in samples}
        if len(dims) != 1:
            raise ValueError(f"samples disagree on dimensionality: {sorted(dims)}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dimension", dims.pop())
        X = np.stack([s.features for s in samples])
        y = np.array([s.label for s in samples], dtype=np.int64)
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        for lab in (-1, 1):
            if not np.any(y == lab):
                warnings.warn(f"dataset contains no samples with label {lab:+d}")

    @property
    def size(self) -> int:
        return len(self.samples)

    @classmethod
    def from_arrays(cls, X, y, normalize: bool = True) -> "Dataset":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ValueError("X must be (S, M) with one label per row")
        rows = [
            Sample(normalize_features(row) if normalize else row, int(lab))
            for row, lab in zip(X, y)
        ]
        return cls(tuple(rows))


def _decode_bits(raw_bits: np.ndarray, num_weights: int, bit_depth: int) -> np.ndarray:
    scale = float(2**bit_depth - 1)
    bits = raw_bits[: num_weights * bit_depth].reshape(num_weights, bit_depth)
    ints = bits @ (1 << np.arange(bit_depth, dtype=np.int64))
    return ints.astype(np.float64) / scale


@dataclass(frozen=True)
class WeightAssignment:
    """Per-classifier weights in [0, 1].

    Solver outputs carry ``raw_bits`` (weight bits in weight-major order,
    optionally followed by one auxiliary indicator bit per weight) and a
    ``bit_depth`` d >= 1; ``values`` is then the fixed-point decoding of the
    weight bits. The continuous variant (``bit_depth=None``, no bits) exists
    for models whose weights were never bit-encoded, e.g. converted boosting
    ensembles.
    """

    values: np.ndarray
    bit_depth: int | None = None
    raw_bits: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if np.any(values < -1e-12) or np.any(values > 1 + 1e-12):
            raise ValueError("weight values must lie in [0, 1]")
        if self.raw_bits is not None:
            bits = np.asarray(self.raw_bits, dtype=np.int8)
            bits.flags.writeable = False
            object.__setattr__(self, "raw_bits", bits)
            if self.bit_depth is None or self.bit_depth < 1:
                raise ValueError("raw_bits requires bit_depth >= 1")
            n, d = len(values), self.bit_depth
            if bits.shape[0] not in (n * d, n * d + n):
                raise ValueError(
                    f"expected {n * d} weight bits (+{n} aux), got {bits.shape[0]}"
                )
            if not np.all((bits == 0) | (bits == 1)):
                raise ValueError("raw_bits entries must be 0/1")
            if not np.allclose(values, _decode_bits(bits, n, d), atol=1e-12, rtol=0):
                raise ValueError("values do not match the bit expansion")

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_bits(cls, bits, num_weights: int, bit_depth: int) -> "WeightAssignment":
        bits = np.asarray(bits, dtype=np.int8)
        return cls(_decode_bits(bits, num_weights, bit_depth), bit_depth, bits)

    @classmethod
    def from_values(cls, values) -> "WeightAssignment":
        return cls(np.asarray(values, dtype=np.float64))

    @property
    def num_active(self) -> int:
        """0-norm of the weight vector (count of strictly positive weights)."""
        return int(np.count_nonzero(self.values > 0))


@dataclass(frozen=True)
class StrongClassifier:
    """Deployable model: a stump dictionary, weights and a decision threshold."""

    dictionary: "_stumps.Dictionary"
    weights: WeightAssignment
    decision_threshold: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.weights) != self.dictionary.size:
            raise ValueError(
                f"{len(self.weights)} weights for a dictionary of size "
                f"{self.dictionary.size}"
            )

    def margin(self, x) -> float:
        return margin(self, x)

    def predict(self, x) -> int:
        return predict(self, x)

    def predict_dataset(self, data: Dataset) -> np.ndarray:
        responses = self.dictionary.evaluate_matrix(data.X)
        margins = responses @ self.weights.values - self.decision_threshold
        return np.where(margins >= 0, 1, -1)

    def error_rate(self, data: Dataset) -> float:
        return float(np.mean(self.predict_dataset(data) != data.y))

    # -- JSON model format (field names are part of the format contract) ----

    def to_json_dict(self) -> dict:
        w = self.weights
        doc = {
            "format": "quboost-classifier/1",
            "dictionary": self.dictionary.to_json_dict(),
            "weights": {
                "bit_depth": w.bit_depth,
                "values": [float(v) for v in w.values],
                "raw_bits": None if w.raw_bits is None else [int(b) for b in w.raw_bits],
            },
            "decision_threshold": float(self.decision_threshold),
            "metadata": self.metadata,
        }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, doc: dict) -> "StrongClassifier":
        if doc.get("format") != "quboost-classifier/1":
            raise ValueError(f"unsupported model format: {doc.get('format')!r}")
        dictionary = _stumps.Dictionary.from_json_dict(doc["dictionary"])
        wdoc = doc["weights"]
        if wdoc.get("raw_bits") is not None:
            weights = WeightAssignment.from_bits(
                wdoc["raw_bits"], len(wdoc["values"]), wdoc["bit_depth"]
            )
        else:
            weights = WeightAssignment(
                np.asarray(wdoc["values"], dtype=np.float64), wdoc.get("bit_depth")
            )
        return cls(dictionary, weights, float(doc["decision_threshold"]),
                   dict(doc.get("metadata", {})))

    @classmethod
    def from_json(cls, text: str) -> "StrongClassifier":
        return cls.from_json_dict(json.loads(text))


def _check_dimension(classifier: StrongClassifier, x: np.ndarray):
    if x.ndim != 1 or x.shape[0] != classifier.dictionary.dimension:
        raise ValueError(
            f"feature vector of length {x.shape[0] if x.ndim == 1 else x.shape} "
            f"does not match dictionary dimensionality "
            f"{classifier.dictionary.dimension}"
        )


def margin(classifier: StrongClassifier, x) -> float:
    """Pre-sign response ``sum_i w_i h_i(x) - T``."""
    x = np.asarray(x, dtype=np.float64)
    _check_dimension(classifier, x)
    responses = classifier.dictionary.evaluate_vector(x)
    return float(responses @ classifier.weights.values
                 - classifier.decision_threshold)


def predict(classifier: StrongClassifier, x) -> int:
    """Label ``sign(sum_i w_i h_i(x) - T)`` with ``sign(0) = +1``."""
    return sign(margin(classifier, x))
