"""Combinatorics behind the bit-precision choice.

Each training sample constrains the weight vector to one side of a
"diagonal" hyperplane ``sum_i c_i w_i = 0`` with coefficients c_i = +-1.
This module counts the full-dimensional regions such arrangements carve
out of weight space (exactly, by feasibility search over sign patterns),
evaluates the binomial upper bound on that count, and turns the
region-vs-lattice counting argument into the number of bits a weight
needs: ``bits >= log2(S/N) + log2(e) - 1``, i.e. logarithmic in the ratio
of training samples to weak classifiers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import linprog

__all__ = [
    "ArrangementSpec",
    "all_diagonal_hyperplanes",
    "count_regions",
    "region_upper_bound",
    "bit_bound",
    "required_bits",
]

MAX_REGION_DIMENSION = 6
MAX_REGION_HYPERPLANES = 31
_FEASIBLE_MARGIN = 1e-9  # strict-inequality slack that counts as feasible


def _canonical(plane) -> tuple[int, ...]:
    c = tuple(int(v) for v in plane)
    if any(v not in (-1, 1) for v in c):
        raise ValueError(f"hyperplane coefficients must be +-1, got {c}")
    # global sign is immaterial: force the first coefficient positive
    return c if c[0] > 0 else tuple(-v for v in c)


@dataclass(frozen=True)
class ArrangementSpec:
    """A central arrangement of diagonal hyperplanes in N dimensions.

    Hyperplanes are canonicalized (first coefficient +1) and deduplicated,
    leaving at most 2**(N-1) distinct planes.
    """

    dimension: int
    hyperplanes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        seen = []
        for plane in self.hyperplanes:
            c = _canonical(plane)
            if len(c) != self.dimension:
                raise ValueError(
                    f"hyperplane {c} does not match dimension {self.dimension}"
                )
            if c not in seen:
                seen.append(c)
        object.__setattr__(self, "hyperplanes", tuple(seen))

    @property
    def num_hyperplanes(self) -> int:
        return len(self.hyperplanes)


def all_diagonal_hyperplanes(dimension: int) -> "ArrangementSpec":
    """The full arrangement: all 2**(N-1) distinct diagonal hyperplanes."""
    planes = [(1,) + rest for rest in product((1, -1), repeat=dimension - 1)]
    return ArrangementSpec(dimension, tuple(planes))


def _strict_feasible(signed_rows: list[np.ndarray], dimension: int):
    """Witness for {row . w > 0 for all rows} inside the unit box, or None.

    Solved as: maximize t subject to row . w >= t, w in [-1, 1]^N,
    t in [0, 1]; the open system is feasible iff the best margin exceeds
    the documented tolerance.
    """
    k = len(signed_rows)
    A = np.zeros((k, dimension + 1))
    A[:, :dimension] = -np.asarray(signed_rows, dtype=np.float64)
    A[:, dimension] = 1.0
    c = np.zeros(dimension + 1)
    c[dimension] = -1.0
    bounds = [(-1.0, 1.0)] * dimension + [(0.0, 1.0)]
    res = linprog(c, A_ub=A, b_ub=np.zeros(k), bounds=bounds, method="highs")
    if not res.success:  # pragma: no cover - defensive; problem is always feasible
        raise RuntimeError(f"feasibility LP failed: {res.message}")
    if -res.fun > _FEASIBLE_MARGIN:
        return res.x[:dimension]
    return None


def count_regions(spec: ArrangementSpec) -> int:
    """Exact number of full-dimensional regions of the arrangement.

    Every region corresponds to one feasible strict sign pattern over the
    hyperplanes, enumerated depth-first with two prunings: an infeasible
    prefix kills its whole subtree, and a parent's witness point certifies
    a child without a new feasibility solve whenever it already clears the
    child's inequality. Central symmetry (w -> -w) halves the search.
    """
    if spec.dimension > MAX_REGION_DIMENSION:
        raise ValueError(
            f"region counting is exhaustive and capped at dimension "
            f"{MAX_REGION_DIMENSION} (got {spec.dimension})"
        )
    if spec.num_hyperplanes > MAX_REGION_HYPERPLANES:
        raise ValueError(
            f"region counting is capped at {MAX_REGION_HYPERPLANES} hyperplanes "
            f"(got {spec.num_hyperplanes})"
        )
    if spec.num_hyperplanes == 0:
        return 1

    planes = [np.asarray(p, dtype=np.float64) for p in spec.hyperplanes]
    count = 0

    def descend(depth: int, signed_rows: list[np.ndarray], witness: np.ndarray):
        nonlocal count
        if depth == len(planes):
            count += 1
            return
        for sigma in (1.0, -1.0):
            row = sigma * planes[depth]
            signed_rows.append(row)
            if float(row @ witness) > _FEASIBLE_MARGIN:
                descend(depth + 1, signed_rows, witness)
            else:
                new_witness = _strict_feasible(signed_rows, spec.dimension)
                if new_witness is not None:
                    descend(depth + 1, signed_rows, new_witness)
            signed_rows.pop()

    # fix the first plane's sign to +1 and double: regions come in +-w pairs
    first = [planes[0]]
    witness = _strict_feasible(first, spec.dimension)
    if witness is None:  # pragma: no cover - a single plane always splits space
        return 0
    descend(1, first, witness)
    return 2 * count


def region_upper_bound(dimension: int, num_hyperplanes: int) -> int:
    """Binomial bound on the region count: sum_{k=0}^{N} C(S, k), exact."""
    if dimension < 0 or num_hyperplanes < 0:
        raise ValueError("arguments must be non-negative")
    return sum(math.comb(num_hyperplanes, k)
               for k in range(min(dimension, num_hyperplanes) + 1))


def bit_bound(num_samples: int, num_classifiers: int) -> float:
    """Real-valued precision bound ``log2(S/N) + log2(e) - 1``."""
    if num_samples < 1 or num_classifiers < 1:
        raise ValueError("sample and classifier counts must be >= 1")
    f = num_samples / num_classifiers
    return math.log2(f) + math.log2(math.e) - 1.0


def required_bits(num_samples: int, num_classifiers: int) -> int:
    """Bits per weight: the bound rounded up, never below one bit.

    Fewer samples than classifiers only lowers the bound, so the floor of
    one bit applies throughout S < N.
    """
    return math.ceil(max(1.0, bit_bound(num_samples, num_classifiers)))
