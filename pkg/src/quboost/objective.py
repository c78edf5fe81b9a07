"""Training objectives over stump responses.

Two losses are supported on a cached response table:

* 0-1 loss with 0-norm regularization, evaluated directly (for annealing),
* quadratic loss, compiled into a QUBO whose energy plus a recorded
  constant offset reproduces the loss for every bit assignment.

For bit depth 1 the 0-norm is linear in the bits and lands on the QUBO
diagonal. For deeper weights each weight gets one auxiliary indicator bit
and the regularizer becomes ``sum_i kappa * w_i * (1 - aux_i) + lam * aux_i``,
which is quadratic in bits because ``w_i`` is linear in its bits; at any
energy minimum with sufficiently large kappa the aux bit equals
``w_i > 0`` and the regularizer collapses back to ``lam * ||w||_0``.

Energy convention: ``energy(v) = v^T Q v`` with linear terms on the
diagonal and symmetric off-diagonal storage (full coupling value on both
halves for same-formula double sums, half on each side for terms that
appear once, so the builder and the solvers agree bit-exactly).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, WeightAssignment
from .stumps import Dictionary

__all__ = [
    "ResponseTable",
    "QuboProblem",
    "zero_one_objective",
    "quadratic_objective",
    "quadratic_loss",
    "build_qubo",
    "default_kappa",
    "qubo_energy",
    "regularization_value",
    "indicator_consistency_check",
    "write_qubo_text",
    "read_qubo_text",
]


@dataclass(frozen=True)
class ResponseTable:
    """Stump outputs ``H[s, i] = h_i(x_s)`` at the dictionary's output scale.

    Build it once per (dictionary, dataset) pair and share it; construction
    is the only data-dependent step, everything downstream reads arrays.
    """

    H: np.ndarray
    y: np.ndarray
    output_scale: float

    def __post_init__(self):
        H = np.ascontiguousarray(self.H, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if H.ndim != 2 or y.shape != (H.shape[0],):
            raise ValueError("H must be (S, N) with one label per row")
        H.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "y", y)

    @property
    def num_samples(self) -> int:
        return self.H.shape[0]

    @property
    def num_classifiers(self) -> int:
        return self.H.shape[1]

    @classmethod
    def build(cls, dictionary: Dictionary, data: Dataset) -> "ResponseTable":
        return cls(dictionary.evaluate_matrix(data.X), data.y,
                   dictionary.output_scale)


def _weight_values(w) -> np.ndarray:
    if isinstance(w, WeightAssignment):
        return w.values
    return np.asarray(w, dtype=np.float64)


def zero_one_objective(w, table: ResponseTable, lam: float) -> float:
    """Misclassification count plus ``lam * ||w||_0``.

    A zero margin counts as an error (Heaviside step with H(0) = 1), so the
    all-zero weight vector scores S errors.
    """
    values = _weight_values(w)
    margins = table.H @ values
    errors = int(np.count_nonzero(table.y * margins <= 0))
    return errors + lam * int(np.count_nonzero(values > 0))


def quadratic_loss(w, table: ResponseTable) -> float:
    values = _weight_values(w)
    residual = table.H @ values - table.y
    return float(residual @ residual)


def quadratic_objective(w, table: ResponseTable, lam: float) -> float:
    """Squared-residual loss plus ``lam * ||w||_0``.

    Intended for tables built at output scale 1/N, where stump sums stay
    comparable to the +-1 labels.
    """
    values = _weight_values(w)
    return quadratic_loss(values, table) + lam * int(np.count_nonzero(values > 0))


@dataclass(frozen=True)
class QuboProblem:
    """Symmetric coefficient matrix over bit variables, plus the decoding map.

    Variable layout: weight bits first in weight-major order (weight i, bit
    b at index ``i * bit_depth + b``), then, for bit depth > 1, one auxiliary
    indicator bit per weight. ``offset`` is the constant dropped from the
    loss (``sum_s y_s^2 = S``), kept so solver energies are comparable to
    objective values.
    """

    coefficients: np.ndarray
    num_weights: int
    bit_depth: int
    lam: float
    kappa: float | None
    offset: float
    layout: tuple[tuple, ...] = field(repr=False)

    def __post_init__(self):
        Q = np.ascontiguousarray(self.coefficients, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("coefficient matrix must be square")
        if not np.array_equal(Q, Q.T):
            raise ValueError("coefficient matrix must be exactly symmetric")
        Q.flags.writeable = False
        object.__setattr__(self, "coefficients", Q)

    @property
    def num_vars(self) -> int:
        return self.coefficients.shape[0]

    @property
    def has_aux(self) -> bool:
        return self.bit_depth > 1

    def weight_bits(self, bits: np.ndarray) -> np.ndarray:
        return np.asarray(bits)[: self.num_weights * self.bit_depth]

    def aux_bits(self, bits: np.ndarray) -> np.ndarray:
        return np.asarray(bits)[self.num_weights * self.bit_depth:]

    def decode(self, bits) -> WeightAssignment:
        bits = np.asarray(bits, dtype=np.int8)
        return WeightAssignment.from_bits(bits, self.num_weights, self.bit_depth)


def qubo_energy(problem: QuboProblem, bits) -> float:
    """Canonical energy ``v^T Q v``; every solver reports this quantity."""
    v = np.asarray(bits, dtype=np.float64)
    return float(v @ problem.coefficients @ v)


def default_kappa(table: ResponseTable, lam: float) -> float:
    """A 'sufficiently large' indicator penalty with a checkable margin.

    Ten times the regularization strength plus the largest single-bit
    diagonal magnitude; ``indicator_consistency_check`` is the post-solve
    diagnostic that the choice was indeed large enough.
    """
    corr_y = table.H.T @ table.y
    diag = np.einsum("si,si->i", table.H, table.H) + lam - 2.0 * corr_y
    return 10.0 * (lam + float(np.max(np.abs(diag))))


def build_qubo(table: ResponseTable, lam: float, bit_depth: int = 1,
               kappa: float | None = None) -> QuboProblem:
    """Compile the regularized quadratic loss into a QUBO.

    Off-diagonal couplings are the response correlations
    ``Corr(h_i, h_j) = sum_s h_i(x_s) h_j(x_s)`` (bit-expanded for depth
    > 1); the diagonal collects each variable's self term, the label
    correlations ``-2 Corr(h_i, y)``, and the regularizer's linear part.
    """
    if bit_depth < 1:
        raise ValueError(f"bit_depth must be >= 1, got {bit_depth}")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    n = table.num_classifiers
    if abs(table.output_scale - 1.0 / n) > 1e-12:
        raise ValueError(
            f"quadratic training expects a response table at scale 1/N = {1.0 / n}, "
            f"got {table.output_scale}"
        )

    C = table.H.T @ table.H          # Corr(h_i, h_j), a Gram matrix
    C = (C + C.T) / 2.0              # force exact symmetry after BLAS
    corr_y = table.H.T @ table.y     # Corr(h_i, y)
    offset = float(table.num_samples)

    d = bit_depth
    if d == 1:
        if kappa is not None:
            raise ValueError("kappa only applies to bit depths > 1")
        Q = C.copy()
        Q[np.diag_indices(n)] += lam - 2.0 * corr_y
        layout = tuple(("weight", i, 0) for i in range(n))
        return QuboProblem(Q, n, 1, lam, None, offset, layout)

    if kappa is None:
        kappa = default_kappa(table, lam)
    if kappa <= lam:
        raise ValueError(
            f"kappa must be positive and exceed lambda for bit depth > 1 "
            f"(got kappa={kappa}, lambda={lam})"
        )

    coeff = (2.0 ** np.arange(d)) / (2.0**d - 1.0)
    nb = n * d
    V = nb + n
    Q = np.zeros((V, V))
    # bit-expanded loss: (i,b),(j,b') coupling = c_b c_b' Corr(h_i, h_j);
    # the diagonal of the kron block is each bit's self term c_b^2 Corr(h_i, h_i)
    Q[:nb, :nb] = np.kron(C, np.outer(coeff, coeff))
    diag_lin = np.kron(-2.0 * corr_y, coeff) + kappa * np.tile(coeff, n)
    Q[np.arange(nb), np.arange(nb)] += diag_lin
    aux = nb + np.arange(n)
    Q[aux, aux] = lam
    # -kappa * w_i * aux_i appears once per (bit, aux) pair: half on each side
    for i in range(n):
        rows = i * d + np.arange(d)
        Q[rows, aux[i]] = -0.5 * kappa * coeff
        Q[aux[i], rows] = -0.5 * kappa * coeff

    layout = tuple(("weight", i, b) for i in range(n) for b in range(d))
    layout += tuple(("aux", i) for i in range(n))
    return QuboProblem(Q, n, d, lam, float(kappa), offset, layout)


def regularization_value(problem: QuboProblem, bits) -> float:
    """The regularizer the QUBO actually encodes, evaluated on raw bits.

    Depth 1: ``lam * ||w||_0``. Deeper: the indicator-bit form
    ``sum_i kappa * w_i * (1 - aux_i) + lam * aux_i``, which equals
    ``lam * ||w||_0`` exactly when every aux bit is consistent.
    """
    bits = np.asarray(bits)
    w = problem.decode(bits).values
    if problem.bit_depth == 1:
        return problem.lam * int(np.count_nonzero(w > 0))
    aux = problem.aux_bits(bits).astype(np.float64)
    return float(np.sum(problem.kappa * w * (1.0 - aux) + problem.lam * aux))


def indicator_consistency_check(bits, problem: QuboProblem) -> bool:
    """True iff every auxiliary bit equals ``w_i > 0``.

    Post-solve diagnostic for bit depths > 1: at an energy minimum with a
    sufficiently large kappa this must hold.
    """
    if not problem.has_aux:
        raise ValueError("indicator bits only exist for bit depths > 1")
    bits = np.asarray(bits)
    w = problem.decode(bits).values
    aux = problem.aux_bits(bits)
    return bool(np.array_equal(aux != 0, w > 0))


# -- plain-text sparse interchange format --------------------------------
#
# header: "num_vars num_nonzeros offset", then one "i j value" line per
# stored entry. Entries are the upper triangle (i <= j) of the symmetric
# coefficient matrix; a reader must mirror j > i entries.

def write_qubo_text(problem: QuboProblem, file) -> None:
    if isinstance(file, (str, bytes)):
        with open(file, "w", newline="\n") as fh:
            write_qubo_text(problem, fh)
            return
    Q = problem.coefficients
    rows, cols = np.nonzero(Q)
    keep = rows <= cols
    rows, cols = rows[keep], cols[keep]
    file.write(f"{problem.num_vars} {rows.size} {float(problem.offset)!r}\n")
    for i, j in zip(rows.tolist(), cols.tolist()):
        file.write(f"{i} {j} {float(Q[i, j])!r}\n")


def read_qubo_text(file) -> tuple[np.ndarray, float]:
    """Parse the sparse text format back into (symmetric matrix, offset)."""
    if isinstance(file, (str, bytes)):
        with open(file, "r") as fh:
            return read_qubo_text(fh)
    header = file.readline().split()
    if len(header) != 3:
        raise ValueError("expected header 'num_vars num_nonzeros offset'")
    num_vars, nnz, offset = int(header[0]), int(header[1]), float(header[2])
    Q = np.zeros((num_vars, num_vars))
    count = 0
    for line in file:
        if not line.strip():
            continue
        i_s, j_s, v_s = line.split()
        i, j, v = int(i_s), int(j_s), float(v_s)
        Q[i, j] = v
        Q[j, i] = v
        count += 1
    if count != nnz:
        raise ValueError(f"header promised {nnz} entries, found {count}")
    return Q, offset
