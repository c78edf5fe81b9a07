"""Synthetic two-Gaussian benchmark data and CSV ingestion.

The generator draws fair-coin labels and isotropic Gaussian features whose
class means sit symmetrically on the first coordinate axis. An overlap
knob in [0, 1] moves the means together: separation is
``6 * sqrt(variance_pos) * (1 - overlap)``, so 0 is maximally segregated
and 1 puts the means on top of each other. The two classes default to
different variances (1 and 2), which keeps the hardest case's error away
from exactly one half; set them equal for the symmetric regime. All
samples are 2-norm normalized, matching the rest of the package.
"""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass

import numpy as np

from .core import Dataset

__all__ = ["SyntheticConfig", "generate", "save_csv", "load_csv"]


@dataclass(frozen=True)
class SyntheticConfig:
    num_samples: int
    overlap: float
    dimension: int = 30
    variance_pos: float = 1.0
    variance_neg: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError(f"overlap must lie in [0, 1], got {self.overlap}")
        if self.variance_pos <= 0 or self.variance_neg <= 0:
            raise ValueError("variances must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


def generate(config: SyntheticConfig) -> Dataset:
    """Sample a dataset from the two-Gaussian mixture; deterministic per seed."""
    rng = np.random.default_rng(config.seed)
    S, M = config.num_samples, config.dimension
    labels = rng.integers(0, 2, size=S) * 2 - 1
    z = rng.standard_normal((S, M))

    separation = 6.0 * np.sqrt(config.variance_pos) * (1.0 - config.overlap)
    mean_axis = np.where(labels == 1, separation / 2.0, -separation / 2.0)
    std = np.where(labels == 1, np.sqrt(config.variance_pos),
                   np.sqrt(config.variance_neg))
    X = z * std[:, None]
    X[:, 0] += mean_axis
    return Dataset.from_arrays(X, labels, normalize=True)


def save_csv(data: Dataset, path) -> None:
    """Write header ``x0..x{M-1},label`` plus one row per sample.

    Floats are written in shortest round-trip form, so load(save(d))
    reproduces every feature exactly.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{j}" for j in range(data.dimension)] + ["label"])
        for sample in data.samples:
            writer.writerow([repr(float(v)) for v in sample.features]
                            + [str(int(sample.label))])


def _parse_label(token: str, row_num: int) -> int:
    try:
        value = float(token)
    except ValueError:
        raise ValueError(f"row {row_num}: label {token!r} is not a number") from None
    if value not in (-1.0, 1.0):
        raise ValueError(f"row {row_num}: label must be -1 or +1, got {token!r}")
    return int(value)


def load_csv(path, normalize: bool = True) -> Dataset:
    """Read a dataset written by :func:`save_csv` (or any CSV with a header,
    M feature columns and a final -1/+1 label column).

    Malformed rows are rejected with their 1-based file row number.
    Normalization is applied on load unless disabled.
    """
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty CSV: missing header") from None
        num_cols = len(header)
        if num_cols < 2:
            raise ValueError("header must list at least one feature and a label")
        features = []
        labels = []
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != num_cols:
                raise ValueError(
                    f"row {row_num}: expected {num_cols} columns, got {len(row)}"
                )
            try:
                values = [float(tok) for tok in row[:-1]]
            except ValueError:
                raise ValueError(
                    f"row {row_num}: malformed feature value in {row[:-1]!r}"
                ) from None
            features.append(values)
            labels.append(_parse_label(row[-1], row_num))
    if not features:
        raise ValueError("CSV contains a header but no data rows")
    return Dataset.from_arrays(np.asarray(features), np.asarray(labels),
                               normalize=normalize)
