"""Command-line interface.

Subcommands: gen-data, train, eval, cv, bench, analyze-bits,
analyze-regions, export-qubo. Every file-producing command also writes a
``<out>.meta.json`` sidecar holding the fully resolved options (implicit
defaults included), so each artifact is reproducible from its record
alone. Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import __version__
from .analysis import (
    all_diagonal_hyperplanes,
    bit_bound,
    count_regions,
    region_upper_bound,
    required_bits,
)
from .core import StrongClassifier
from .data import SyntheticConfig, generate, load_csv, save_csv
from .objective import ResponseTable, build_qubo, write_qubo_text
from .pipeline import (
    SplitSpec,
    TrainSpec,
    benchmark_sweep,
    cross_validate_lambda,
    train,
    write_benchmark_csv,
)
from .solvers import AnnealSchedule, TabuConfig
from .stumps import build_dictionary


def _json_ready(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return _json_ready(dataclasses.asdict(value))
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def _dump_json(doc: dict, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(_json_ready(doc), sort_keys=True, indent=2) + "\n")


def _write_provenance(args: argparse.Namespace, out_path) -> None:
    options = {k: _json_ready(v) for k, v in sorted(vars(args).items())
               if k not in ("func", "command")}
    record = {
        "tool": "quboost",
        "version": __version__,
        "command": args.command,
        "options": options,
    }
    _dump_json(record, f"{out_path}.meta.json")


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip() != "")


def _split_spec(text: str) -> SplitSpec:
    parts = _parse_floats(text)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            "--split needs three comma-separated values (train,val,test)")
    return SplitSpec(*parts)


def _tabu_config(args) -> TabuConfig:
    return TabuConfig(
        num_starts=args.tabu_starts,
        tabu_tenure=args.tabu_tenure,
        max_iterations_per_start=args.tabu_iters,
        aspiration=not args.no_aspiration,
    )


def _anneal_schedule(args) -> AnnealSchedule | None:
    fields = (args.anneal_t0, args.anneal_steps)
    if all(v is None for v in fields):
        return None
    if any(v is None for v in fields):
        raise SystemExit("--anneal-t0 and --anneal-steps must be given together")
    return AnnealSchedule(
        t_initial=args.anneal_t0,
        cooling_factor=args.anneal_cool,
        steps_per_temperature=args.anneal_steps,
        t_final=args.anneal_tfinal,
    )


# -- subcommand handlers --------------------------------------------------

def _cmd_gen_data(args) -> int:
    config = SyntheticConfig(
        num_samples=args.samples,
        overlap=args.overlap,
        dimension=args.dim,
        variance_pos=args.variance_pos,
        variance_neg=args.variance_neg,
        seed=args.seed,
    )
    dataset = generate(config)
    save_csv(dataset, args.out)
    _write_provenance(args, args.out)
    print(f"wrote {dataset.size} samples of dimension {dataset.dimension} "
          f"to {args.out}")
    return 0


def _train_spec(args) -> TrainSpec:
    return TrainSpec(
        method=args.method,
        order=args.order,
        bit_depth=args.bits,
        lambda_grid=_parse_floats(args.lambda_grid) if args.lambda_grid else None,
        kappa=args.kappa,
        split=args.split,
        seed=args.seed,
        cv_folds=args.folds,
        tabu=_tabu_config(args),
        anneal=_anneal_schedule(args),
        adaboost_max_rounds=args.max_rounds,
    )


def _cmd_train(args) -> int:
    dataset = load_csv(args.data, normalize=not args.no_normalize)
    classifier, report = train(dataset, _train_spec(args))
    with open(args.out, "w", newline="\n") as fh:
        fh.write(classifier.to_json())
    _write_provenance(args, args.out)
    if args.report:
        _dump_json(report.to_json_dict(), args.report)
        _write_provenance(args, args.report)
    err = report.test_error_rate
    print(f"method={args.method} test_error="
          f"{'n/a' if err is None else f'{err:.4f}'} "
          f"active={report.num_active_weak_classifiers} "
          f"lambda={report.chosen_lambda} T={report.threshold:.6g} "
          f"runtime={report.runtime_seconds:.2f}s")
    return 0


def _cmd_eval(args) -> int:
    with open(args.model) as fh:
        classifier = StrongClassifier.from_json(fh.read())
    dataset = load_csv(args.data, normalize=not args.no_normalize)
    error = classifier.error_rate(dataset)
    doc = {
        "test_error_rate": error,
        "num_samples": dataset.size,
        "num_active_weak_classifiers": classifier.weights.num_active,
        "decision_threshold": classifier.decision_threshold,
    }
    if args.out:
        _dump_json(doc, args.out)
        _write_provenance(args, args.out)
    print(f"error_rate={error:.6f} on {dataset.size} samples "
          f"(active={classifier.weights.num_active})")
    return 0


def _cmd_cv(args) -> int:
    dataset = load_csv(args.data, normalize=not args.no_normalize)
    result = cross_validate_lambda(dataset, _train_spec(args))
    doc = {
        "chosen_lambda": result.chosen_lambda,
        "admissible": list(result.admissible),
        "mean_active": {repr(k): v for k, v in result.mean_active.items()},
        "fold_errors": {repr(k): list(v) for k, v in result.fold_errors.items()},
    }
    if args.out:
        _dump_json(doc, args.out)
        _write_provenance(args, args.out)
    print(f"chosen lambda: {result.chosen_lambda!r}")
    return 0


def _cmd_bench(args) -> int:
    seeds = tuple(range(args.seed, args.seed + args.num_seeds))
    rows = benchmark_sweep(
        overlaps=_parse_floats(args.overlaps),
        methods=tuple(args.methods.split(",")),
        f_values=_parse_floats(args.f),
        seeds=seeds,
        dimension=args.dim,
        order=args.order,
        bit_depth=args.bits,
        variance_pos=args.variance_pos,
        variance_neg=args.variance_neg,
        test_size=args.test_size,
        lambda_grid=_parse_floats(args.lambda_grid) if args.lambda_grid else None,
        cv_folds=args.folds,
        adaboost_max_rounds=args.max_rounds,
        jobs=args.jobs,
    )
    write_benchmark_csv(rows, args.out)
    _write_provenance(args, args.out)
    print(f"wrote {len(rows)} benchmark rows to {args.out}")
    return 0


def _cmd_analyze_bits(args) -> int:
    lines = ["samples,classifiers,f,bound,required_bits"]
    lines.append(
        f"{args.samples},{args.classifiers},"
        f"{args.samples / args.classifiers!r},"
        f"{bit_bound(args.samples, args.classifiers)!r},"
        f"{required_bits(args.samples, args.classifiers)}"
    )
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        _write_provenance(args, args.out)
    return 0


def _cmd_analyze_regions(args) -> int:
    if not args.all_hyperplanes:
        raise SystemExit("only --all-hyperplanes arrangements are supported")
    spec = all_diagonal_hyperplanes(args.dim)
    regions = count_regions(spec)
    bound = region_upper_bound(args.dim, spec.num_hyperplanes)
    text = ("dimension,num_hyperplanes,regions,upper_bound\n"
            f"{args.dim},{spec.num_hyperplanes},{regions},{bound}\n")
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        _write_provenance(args, args.out)
    return 0


def _cmd_export_qubo(args) -> int:
    dataset = load_csv(args.data, normalize=not args.no_normalize)
    dictionary = build_dictionary(dataset, args.order, "one_over_N")
    table = ResponseTable.build(dictionary, dataset)
    kappa = args.kappa if args.bits > 1 else None
    problem = build_qubo(table, args.lam, args.bits, kappa)
    write_qubo_text(problem, args.out)
    _write_provenance(args, args.out)
    print(f"wrote QUBO with {problem.num_vars} variables to {args.out}")
    return 0


# -- parser ---------------------------------------------------------------

def _add_data_arg(p):
    p.add_argument("--data", required=True, help="dataset CSV path")
    p.add_argument("--no-normalize", action="store_true",
                   help="skip 2-norm normalization on load")


def _add_train_args(p, need_seed=True):
    p.add_argument("--method", required=True, choices=("qp", "zero_one", "adaboost"))
    p.add_argument("--order", type=int, default=1, choices=(1, 2))
    p.add_argument("--bits", type=int, default=1, help="weight bit depth")
    p.add_argument("--lambda-grid", default=None,
                   help="comma-separated regularization strengths")
    p.add_argument("--kappa", type=float, default=None,
                   help="indicator-bit penalty (bit depth > 1 only)")
    p.add_argument("--split", type=_split_spec, default=SplitSpec(0.5, 0.25, 0.25),
                   help="train,val,test as fractions or exact counts")
    p.add_argument("--folds", type=int, default=30, help="cross-validation folds")
    p.add_argument("--seed", type=int, required=need_seed, default=None if need_seed else 0)
    p.add_argument("--max-rounds", type=int, default=200,
                   help="boosting round budget")
    p.add_argument("--tabu-starts", type=int, default=32)
    p.add_argument("--tabu-tenure", type=int, default=None)
    p.add_argument("--tabu-iters", type=int, default=None,
                   help="tabu iterations per start (default 500V)")
    p.add_argument("--no-aspiration", action="store_true")
    p.add_argument("--anneal-t0", type=float, default=None)
    p.add_argument("--anneal-cool", type=float, default=0.97)
    p.add_argument("--anneal-steps", type=int, default=None,
                   help="annealing proposals per temperature")
    p.add_argument("--anneal-tfinal", type=float, default=1e-3)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quboost",
        description="Train decision-stump ensembles by regularized binary "
                    "optimization and benchmark them against boosting.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="sample the synthetic two-Gaussian data")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--overlap", type=float, required=True)
    p.add_argument("--dim", type=int, default=30)
    p.add_argument("--variance-pos", type=float, default=1.0)
    p.add_argument("--variance-neg", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("train", help="train one classifier")
    _add_data_arg(p)
    _add_train_args(p)
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--report", default=None, help="evaluation report JSON path")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model JSON on a dataset")
    p.add_argument("--model", required=True)
    _add_data_arg(p)
    p.add_argument("--out", default=None, help="report JSON path")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("cv", help="cross-validate the regularization strength")
    _add_data_arg(p)
    _add_train_args(p)
    p.add_argument("--out", default=None, help="result JSON path")
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("bench", help="run the synthetic benchmark sweep")
    p.add_argument("--overlaps", default="0.7,0.8,0.9,1.0")
    p.add_argument("--methods", default="qp,zero_one,adaboost")
    p.add_argument("--f", default="1,8", help="training-samples-per-classifier ratios")
    p.add_argument("--num-seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="first seed of the range")
    p.add_argument("--dim", type=int, default=30)
    p.add_argument("--order", type=int, default=1, choices=(1, 2))
    p.add_argument("--bits", type=int, default=1)
    p.add_argument("--variance-pos", type=float, default=1.0)
    p.add_argument("--variance-neg", type=float, default=2.0)
    p.add_argument("--test-size", type=int, default=2000)
    p.add_argument("--lambda-grid", default=None)
    p.add_argument("--folds", type=int, default=30)
    p.add_argument("--max-rounds", type=int, default=200)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="results CSV path")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("analyze-bits", help="bit-precision bound for S samples "
                                            "and N weak classifiers")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--classifiers", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_analyze_bits)

    p = sub.add_parser("analyze-regions", help="count solution regions of the "
                                               "diagonal hyperplane arrangement")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--all-hyperplanes", action="store_true",
                   help="use all 2^(N-1) distinct diagonal hyperplanes")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_analyze_regions)

    p = sub.add_parser("export-qubo", help="write the quadratic-loss QUBO in "
                                           "the sparse text format")
    _add_data_arg(p)
    p.add_argument("--order", type=int, default=1, choices=(1, 2))
    p.add_argument("--bits", type=int, default=1)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export_qubo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
