"""End-to-end training and benchmarking.

Protocol (for the two optimization methods):

1. split the data into train / validation / test,
2. fit stump thresholds on the train split,
3. pick the regularization strength by k-fold cross-validation over the
   train+validation pool, discarding strengths whose mean active-classifier
   count exceeds N/2 (ties go to the stronger regularization),
4. solve for the weights on the train split with the method's solver
   (tabu search for the quadratic loss, annealing for the 0-1 loss),
5. set the decision threshold to the mean pre-sign response over the
   validation split,
6. report the held-out test error and the active-classifier count.

The boosting baseline replaces steps 3-5 with a sweep of the round count
on the validation split (threshold stays 0). The test split never
influences thresholds, the chosen strength, the solver, or T.
"""

from __future__ import annotations

import hashlib
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .adaboost import train_adaboost
from .core import Dataset, StrongClassifier, WeightAssignment
from .data import SyntheticConfig, generate
from .objective import ResponseTable, build_qubo, indicator_consistency_check
from .solvers import (
    AnnealSchedule,
    TabuConfig,
    ZeroOneLossObjective,
    solve_anneal,
    solve_tabu,
)
from .stumps import Dictionary, build_dictionary, dictionary_size

__all__ = [
    "SplitSpec",
    "TrainSpec",
    "EvalReport",
    "CvResult",
    "derive_seed",
    "split_dataset",
    "concat_datasets",
    "default_lambda_grid",
    "fit_threshold_T",
    "cross_validate_lambda",
    "train",
    "benchmark_sweep",
    "write_benchmark_csv",
    "BENCHMARK_COLUMNS",
]

METHODS = ("qp", "zero_one", "adaboost")


def derive_seed(base: int, *parts) -> int:
    """Stable 64-bit sub-seed for a named stage of a run."""
    tag = ":".join([str(int(base) & (2**64 - 1))] + [str(p) for p in parts])
    digest = hashlib.blake2b(tag.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation/test sizes, as fractions summing to one or as
    exact sample counts (all-integer values >= 0 are read as counts)."""

    train: float
    validation: float
    test: float

    def __post_init__(self):
        values = (self.train, self.validation, self.test)
        if any(v < 0 for v in values):
            raise ValueError("split sizes cannot be negative")
        if not self.is_counts and abs(sum(values) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1, got {values}")

    @property
    def is_counts(self) -> bool:
        return all(float(v).is_integer() for v in (self.train, self.validation, self.test)) \
            and sum((self.train, self.validation, self.test)) > 1.5

    def counts_for(self, total: int) -> tuple[int, int, int]:
        if self.is_counts:
            counts = (int(self.train), int(self.validation), int(self.test))
            if sum(counts) != total:
                raise ValueError(
                    f"split counts {counts} do not add up to dataset size {total}"
                )
            return counts
        n_train = round(total * self.train)
        n_val = round(total * self.validation)
        n_train = min(n_train, total)
        n_val = min(n_val, total - n_train)
        return n_train, n_val, total - n_train - n_val


@dataclass(frozen=True)
class TrainSpec:
    """Everything one training run depends on; fully determines the output
    together with the dataset."""

    method: str
    order: int = 1
    bit_depth: int = 1
    lambda_grid: tuple[float, ...] | None = None
    kappa: float | None = None
    split: SplitSpec = field(default_factory=lambda: SplitSpec(0.5, 0.25, 0.25))
    seed: int = 0
    cv_folds: int = 30
    tabu: TabuConfig = field(default_factory=TabuConfig)
    anneal: AnnealSchedule | None = None
    cv_tabu: TabuConfig | None = None
    cv_anneal: AnnealSchedule | None = None
    adaboost_max_rounds: int = 200

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        if self.bit_depth < 1:
            raise ValueError("bit_depth must be >= 1")
        if self.lambda_grid is not None:
            grid = tuple(float(v) for v in self.lambda_grid)
            if not grid:
                raise ValueError("lambda_grid may not be empty")
            if any(v < 0 for v in grid):
                raise ValueError("lambda values must be >= 0")
            object.__setattr__(self, "lambda_grid", grid)


@dataclass(frozen=True)
class EvalReport:
    """What a training run is judged by. ``runtime_seconds`` is volatile
    and therefore excluded from serialized artifacts."""

    test_error_rate: float | None
    num_active_weak_classifiers: int
    chosen_lambda: float | None
    threshold: float
    fold_validation_errors: tuple[float, ...]
    runtime_seconds: float
    details: dict = field(default_factory=dict)

    def to_json_dict(self, include_runtime: bool = False) -> dict:
        doc = {
            "test_error_rate": self.test_error_rate,
            "num_active_weak_classifiers": self.num_active_weak_classifiers,
            "chosen_lambda": self.chosen_lambda,
            "threshold": self.threshold,
            "fold_validation_errors": list(self.fold_validation_errors),
            "details": self.details,
        }
        if include_runtime:
            doc["runtime_seconds"] = self.runtime_seconds
        return doc


@dataclass(frozen=True)
class CvResult:
    chosen_lambda: float
    fold_errors: dict        # lambda -> tuple of per-fold validation error rates
    mean_active: dict        # lambda -> mean active-classifier count
    admissible: tuple[float, ...]


def default_lambda_grid(num_samples: int, num_classifiers: int) -> tuple[float, ...]:
    """Default strengths scaled to the quadratic-loss magnitude S/N^2."""
    base = num_samples / num_classifiers**2
    return tuple(m * base for m in (0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0))


def split_dataset(data: Dataset, split: SplitSpec, seed: int):
    """Deterministic shuffled split; empty parts come back as None."""
    counts = split.counts_for(data.size)
    perm = np.random.default_rng(seed & (2**64 - 1)).permutation(data.size)
    out = []
    offset = 0
    for count in counts:
        idx = perm[offset:offset + count]
        offset += count
        out.append(Dataset(tuple(data.samples[i] for i in idx)) if count else None)
    return tuple(out)


def concat_datasets(*parts) -> Dataset:
    samples = []
    for part in parts:
        if part is not None:
            samples.extend(part.samples)
    return Dataset(tuple(samples))


def fit_threshold_T(weights, dictionary: Dictionary, validation) -> float:
    """Decision threshold: the mean pre-sign response of the weighted
    ensemble over the validation samples."""
    if validation is None or validation.size == 0:
        warnings.warn("no validation data: decision threshold defaults to 0")
        return 0.0
    values = weights.values if isinstance(weights, WeightAssignment) \
        else np.asarray(weights, dtype=np.float64)
    responses = dictionary.evaluate_matrix(validation.X)
    return float(np.mean(responses @ values))


def _cv_tabu_config(spec: TrainSpec, num_vars: int) -> TabuConfig:
    if spec.cv_tabu is not None:
        return spec.cv_tabu
    return TabuConfig(num_starts=4,
                      max_iterations_per_start=max(200, 80 * num_vars))


def _cv_anneal_schedule(spec: TrainSpec, loss_scale: float, num_vars: int) -> AnnealSchedule:
    if spec.cv_anneal is not None:
        return spec.cv_anneal
    return AnnealSchedule(t_initial=max(float(loss_scale), 1.0),
                          cooling_factor=0.9,
                          steps_per_temperature=4 * num_vars,
                          t_final=1e-2)


def _solve_weights(table: ResponseTable, spec: TrainSpec, lam: float, seed: int,
                   cv: bool):
    """One solver run at a fixed strength; returns (weights, result, problem)."""
    n = table.num_classifiers
    d = spec.bit_depth
    if spec.method == "qp":
        kappa = spec.kappa if d > 1 else None
        problem = build_qubo(table, lam, d, kappa)
        config = _cv_tabu_config(spec, problem.num_vars) if cv else spec.tabu
        result = solve_tabu(problem, config, seed)
        return problem.decode(result.best_bits), result, problem
    objective = ZeroOneLossObjective(table, lam, d)
    if cv:
        schedule = _cv_anneal_schedule(spec, table.num_samples, objective.num_vars)
    else:
        schedule = spec.anneal or AnnealSchedule.default_for(
            table.num_samples, objective.num_vars)
    result = solve_anneal(objective, schedule=schedule, seed=seed)
    return WeightAssignment.from_bits(result.best_bits, n, d), result, None


def _subtable(table: ResponseTable, idx: np.ndarray) -> ResponseTable:
    return ResponseTable(table.H[idx], table.y[idx], table.output_scale)


def cross_validate_lambda(data: Dataset, spec: TrainSpec,
                          dictionary: Dictionary | None = None) -> CvResult:
    """Pick the regularization strength by k-fold cross-validation.

    Strengths whose mean active count exceeds N/2 are discarded; among the
    rest the lowest mean validation error wins, ties toward the larger
    strength. If everything is discarded the largest grid value is used
    (with a warning). Folds are contiguous chunks of a seeded shuffle, so
    the partition is deterministic per seed.
    """
    if spec.method == "adaboost":
        raise ValueError("the boosting baseline does not use a lambda grid")
    if dictionary is None:
        scale_mode = "one_over_N" if spec.method == "qp" else "unit"
        dictionary = build_dictionary(data, spec.order, scale_mode)
    table = ResponseTable.build(dictionary, data)
    n = dictionary.size
    grid = spec.lambda_grid or default_lambda_grid(data.size, n)

    n_folds = min(spec.cv_folds, data.size)
    perm = np.random.default_rng(
        derive_seed(spec.seed, "cv-folds") & (2**64 - 1)).permutation(data.size)
    folds = np.array_split(perm, n_folds)

    fold_errors: dict[float, tuple[float, ...]] = {}
    mean_active: dict[float, float] = {}
    for lam_index, lam in enumerate(grid):
        errors = []
        actives = []
        for fold_index, fold in enumerate(folds):
            mask = np.ones(data.size, dtype=bool)
            mask[fold] = False
            sub = _subtable(table, np.nonzero(mask)[0])
            seed = derive_seed(spec.seed, "cv", lam_index, fold_index)
            weights, _, _ = _solve_weights(sub, spec, lam, seed, cv=True)
            threshold = float(np.mean(sub.H @ weights.values))
            margins = table.H[fold] @ weights.values - threshold
            predicted = np.where(margins >= 0, 1, -1)
            errors.append(float(np.mean(predicted != table.y[fold])))
            actives.append(weights.num_active)
        fold_errors[lam] = tuple(errors)
        mean_active[lam] = float(np.mean(actives))

    admissible = tuple(lam for lam in grid if mean_active[lam] <= n / 2)
    if admissible:
        # lowest mean error; ties toward the larger (stronger) lambda
        best = max(admissible,
                   key=lambda lam: (-float(np.mean(fold_errors[lam])), lam))
    else:
        best = max(grid)
        warnings.warn(
            "every lambda exceeded the N/2 active-classifier constraint; "
            f"falling back to the largest grid value {best}"
        )
    return CvResult(best, fold_errors, mean_active, admissible)


def _sweep_adaboost_rounds(model, table_val: ResponseTable | None):
    """Validation errors of every round-prefix; best prefix wins, ties to
    the fewest rounds. Without validation data the full model stands."""
    if table_val is None or model.num_rounds == 0:
        return model.num_rounds, ()
    margins = np.zeros(table_val.num_samples)
    errors = []
    for index, alpha in model.rounds:
        margins = margins + alpha * table_val.H[:, index]
        predicted = np.where(margins >= 0, 1, -1)
        errors.append(float(np.mean(predicted != table_val.y)))
    best = int(np.argmin(errors)) + 1   # first minimum == fewest rounds
    return best, tuple(errors)


def train(data: Dataset, spec: TrainSpec) -> tuple[StrongClassifier, EvalReport]:
    """Run the full protocol on one dataset; deterministic per (data, spec)."""
    t0 = time.perf_counter()
    train_ds, val_ds, test_ds = split_dataset(
        data, spec.split, derive_seed(spec.seed, "split"))
    if train_ds is None:
        raise ValueError("the training split is empty")

    scale_mode = "one_over_N" if spec.method == "qp" else "unit"
    dictionary = build_dictionary(train_ds, spec.order, scale_mode)
    details: dict = {
        "method": spec.method,
        "order": spec.order,
        "bit_depth": spec.bit_depth,
        "seed": spec.seed,
        "split_sizes": [train_ds.size,
                        0 if val_ds is None else val_ds.size,
                        0 if test_ds is None else test_ds.size],
    }

    if spec.method == "adaboost":
        model = train_adaboost(train_ds, dictionary, spec.adaboost_max_rounds)
        table_val = ResponseTable.build(dictionary, val_ds) if val_ds else None
        best_rounds, val_errors = _sweep_adaboost_rounds(model, table_val)
        model = model.truncated(best_rounds)
        details["rounds"] = best_rounds
        base = model.to_strong_classifier()
        classifier = StrongClassifier(base.dictionary, base.weights, 0.0,
                                      {**details})
        chosen_lambda = None
        fold_errors: tuple[float, ...] = ()
        details["validation_errors_by_rounds"] = list(val_errors)
    else:
        pool = concat_datasets(train_ds, val_ds)
        cv = cross_validate_lambda(pool, spec, dictionary)
        chosen_lambda = cv.chosen_lambda
        fold_errors = cv.fold_errors[chosen_lambda]
        table_train = ResponseTable.build(dictionary, train_ds)
        weights, result, problem = _solve_weights(
            table_train, spec, chosen_lambda,
            derive_seed(spec.seed, "final-solve"), cv=False)
        if problem is not None and problem.has_aux:
            if not indicator_consistency_check(result.best_bits, problem):
                warnings.warn(
                    "auxiliary indicator bits are inconsistent at the solver "
                    "optimum; consider a larger kappa"
                )
        threshold = fit_threshold_T(weights, dictionary, val_ds)
        details["solver_evaluations"] = result.evaluations
        details["kappa"] = None if problem is None else problem.kappa
        classifier = StrongClassifier(
            dictionary, weights, threshold,
            {**details, "lambda": chosen_lambda})

    test_error = None if test_ds is None else classifier.error_rate(test_ds)
    report = EvalReport(
        test_error_rate=test_error,
        num_active_weak_classifiers=classifier.weights.num_active,
        chosen_lambda=chosen_lambda,
        threshold=classifier.decision_threshold,
        fold_validation_errors=fold_errors,
        runtime_seconds=time.perf_counter() - t0,
        details=details,
    )
    return classifier, report


# -- benchmark sweep ------------------------------------------------------

BENCHMARK_COLUMNS = ("method", "order", "bits", "f", "overlap", "seed",
                     "test_error", "active_count")


@dataclass(frozen=True)
class BenchRow:
    method: str
    order: int
    bits: int
    f: float
    overlap: float
    seed: int
    test_error: float
    active_count: int

    def as_tuple(self):
        return (self.method, self.order, self.bits, self.f, self.overlap,
                self.seed, self.test_error, self.active_count)


def _run_benchmark_cell(args):
    """One (f, overlap, seed) cell: fresh data, one run per method.

    Data is seeded by (seed, f, overlap) only, so all methods within the
    cell see identical samples. Must stay top-level for pickling.
    """
    (f, overlap, seed, methods, dimension, order, bit_depth, variance_pos,
     variance_neg, test_size, lambda_grid, cv_folds, max_rounds) = args
    n = dictionary_size(dimension, order)
    s_train = int(round(f * n))
    s_val = s_train
    config = SyntheticConfig(
        num_samples=s_train + s_val + test_size,
        overlap=overlap,
        dimension=dimension,
        variance_pos=variance_pos,
        variance_neg=variance_neg,
        seed=derive_seed(seed, "data", f, overlap),
    )
    dataset = generate(config)
    split = SplitSpec(s_train, s_val, test_size)
    rows = []
    for method in methods:
        spec = TrainSpec(
            method=method,
            order=order,
            bit_depth=bit_depth,
            lambda_grid=lambda_grid,
            split=split,
            seed=derive_seed(seed, "train", method, f, overlap),
            cv_folds=cv_folds,
            adaboost_max_rounds=max_rounds,
        )
        _, report = train(dataset, spec)
        rows.append(BenchRow(method, order, bit_depth, f, overlap, seed,
                             report.test_error_rate,
                             report.num_active_weak_classifiers))
    return rows


def benchmark_sweep(overlaps, methods, f_values, seeds, *, dimension: int = 30,
                    order: int = 1, bit_depth: int = 1,
                    variance_pos: float = 1.0, variance_neg: float = 2.0,
                    test_size: int = 2000, lambda_grid=None, cv_folds: int = 30,
                    adaboost_max_rounds: int = 200, jobs: int = 1) -> list[BenchRow]:
    """Full factorial sweep; returns rows in canonical (f, overlap, seed,
    method) order regardless of how cells are scheduled."""
    overlaps = tuple(float(v) for v in overlaps)
    f_values = tuple(float(v) for v in f_values)
    seeds = tuple(int(s) for s in seeds)
    methods = tuple(methods)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods: {sorted(unknown)}")
    if not overlaps or not f_values or not seeds or not methods:
        raise ValueError("overlaps, methods, f_values and seeds must be non-empty")

    cells = [
        (f, overlap, seed, methods, dimension, order, bit_depth, variance_pos,
         variance_neg, test_size, lambda_grid, cv_folds, adaboost_max_rounds)
        for f in f_values
        for overlap in overlaps
        for seed in seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_cell = list(pool.map(_run_benchmark_cell, cells))
    else:
        per_cell = [_run_benchmark_cell(cell) for cell in cells]
    return [row for rows in per_cell for row in rows]


def write_benchmark_csv(rows, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(BENCHMARK_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join([
                row.method, str(row.order), str(row.bits), repr(row.f),
                repr(row.overlap), str(row.seed), repr(row.test_error),
                str(row.active_count),
            ]) + "\n")
