"""quboost: decision-stump ensembles trained by regularized binary
optimization (quadratic loss as a QUBO, or 0-1 loss directly), with an
AdaBoost baseline over the same stump dictionaries."""

from .core import (
    Dataset,
    Sample,
    StrongClassifier,
    WeightAssignment,
    margin,
    predict,
)
from .stumps import Dictionary, StumpSpec, build_dictionary, dictionary_size
from .objective import (
    QuboProblem,
    ResponseTable,
    build_qubo,
    qubo_energy,
    quadratic_objective,
    zero_one_objective,
)
from ._kernels import active_backend

__version__ = "0.1.0"

__all__ = [
    "Sample",
    "Dataset",
    "WeightAssignment",
    "StrongClassifier",
    "predict",
    "margin",
    "StumpSpec",
    "Dictionary",
    "build_dictionary",
    "dictionary_size",
    "ResponseTable",
    "QuboProblem",
    "build_qubo",
    "qubo_energy",
    "quadratic_objective",
    "zero_one_objective",
    "active_backend",
    "__version__",
]
