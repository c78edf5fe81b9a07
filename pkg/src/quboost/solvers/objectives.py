"""Bit-vector objectives in the form the solvers consume.

Both classes are plain callables (``objective(bits) -> float``) so any
solver can treat them as black boxes, and both additionally expose a
vectorized ``value_batch`` plus the raw arrays the compiled kernels need.
"""

from __future__ import annotations

import numpy as np

from ..objective import QuboProblem, ResponseTable

__all__ = ["QuboObjective", "ZeroOneLossObjective"]


class QuboObjective:
    """Energy ``v^T Q v`` of a symmetric coefficient matrix."""

    def __init__(self, problem_or_matrix):
        if isinstance(problem_or_matrix, QuboProblem):
            Q = problem_or_matrix.coefficients
        else:
            Q = np.asarray(problem_or_matrix, dtype=np.float64)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("coefficient matrix must be square")
        self.Q = np.ascontiguousarray(Q)
        self.num_vars = Q.shape[0]

    def __call__(self, bits) -> float:
        v = np.asarray(bits, dtype=np.float64)
        return float(v @ self.Q @ v)

    def value_batch(self, B: np.ndarray) -> np.ndarray:
        B = np.asarray(B, dtype=np.float64)
        return np.einsum("kv,kv->k", B @ self.Q, B)


class ZeroOneLossObjective:
    """Regularized 0-1 loss over the weight bits of a stump ensemble.

    Bit ``i * d + b`` is bit b of weight i; weights decode to
    ``bitsum / (2**d - 1)``. A zero margin counts as an error and the
    0-norm counts weights with any bit set.
    """

    def __init__(self, table: ResponseTable, lam: float, bit_depth: int = 1):
        if bit_depth < 1:
            raise ValueError(f"bit_depth must be >= 1, got {bit_depth}")
        if lam < 0:
            raise ValueError(f"lambda must be >= 0, got {lam}")
        self.table = table
        self.lam = float(lam)
        self.bit_depth = bit_depth
        self.num_weights = table.num_classifiers
        self.num_vars = self.num_weights * bit_depth
        self.coeff = (2.0 ** np.arange(bit_depth)) / (2.0**bit_depth - 1.0)

    def decode(self, bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.float64)
        return bits.reshape(self.num_weights, self.bit_depth) @ self.coeff

    def __call__(self, bits) -> float:
        w = self.decode(bits)
        margins = self.table.H @ w
        errors = int(np.count_nonzero(self.table.y * margins <= 0.0))
        return errors + self.lam * int(np.count_nonzero(w > 0))

    def value_batch(self, B: np.ndarray) -> np.ndarray:
        B = np.asarray(B, dtype=np.float64)
        W = B.reshape(B.shape[0], self.num_weights, self.bit_depth) @ self.coeff
        margins = W @ self.table.H.T
        errors = np.count_nonzero(self.table.y[None, :] * margins <= 0.0, axis=1)
        support = np.count_nonzero(W > 0, axis=1)
        return errors + self.lam * support
