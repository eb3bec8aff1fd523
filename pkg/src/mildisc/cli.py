"""Command-line entry point.

Exit codes: 0 success, 2 usage, 3 I/O or parse failure, 4 contract violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .dataset import dump_csv, load_dataset, load_manifest
from .errors import ContractError, InputError, ParameterError
from .harness import ExperimentConfig, compare, run_experiment, EvalReport
from .pipeline import DiscretizerSpec, fit_dataset, transform_dataset
from .scheme import ALGORITHMS, dumps_schemes, loads_schemes

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CONTRACT = 0, 2, 3, 4


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {value}")
    return value


def _algo_list(text):
    algos = [a.strip() for a in text.split(",") if a.strip()]
    if not algos:
        raise argparse.ArgumentTypeError("at least one algorithm is required")
    for a in algos:
        if a not in ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {a!r}")
    return algos


def _add_discretizer_flags(p):
    p.add_argument("--c", type=_positive, default=20, help="subintervals per class (default 20)")
    p.add_argument("--k", type=_positive, default=3, help="merge divisor in ceil(TS/k) (default 3)")
    p.add_argument("--bins", type=_positive, default=10, help="bins for equal-width/frequency")
    p.add_argument("--seed", type=int, default=0)


def _add_eval_flags(p):
    p.add_argument("--manifest", type=Path, default=None,
                   help="dataset manifest (default: bundled manifest)")
    p.add_argument("--runs", type=_positive, default=50)
    p.add_argument("--train-fraction", type=_fraction, default=0.30)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--full", action="store_true",
                   help="do not subsample large datasets")
    p.add_argument("--out", type=Path, default=None, help="write the JSON report here")


def build_parser():
    parser = argparse.ArgumentParser(prog="mildisc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discretize", help="fit schemes and discretize a dataset")
    p.add_argument("input", type=Path)
    p.add_argument("--algo", choices=ALGORITHMS, default="modified-mil")
    _add_discretizer_flags(p)
    p.add_argument("-o", "--output", type=Path, default=None)
    p.add_argument("--schemes", type=Path, default=None)

    p = sub.add_parser("apply", help="discretize unseen data with a scheme file")
    p.add_argument("input", type=Path)
    p.add_argument("--schemes", type=Path, required=True)
    p.add_argument("-o", "--output", type=Path, default=None)

    p = sub.add_parser("evaluate", help="repeated-split accuracy for one dataset")
    p.add_argument("--dataset", required=True, help="manifest entry name")
    p.add_argument("--algo", choices=ALGORITHMS, default="modified-mil")
    _add_discretizer_flags(p)
    _add_eval_flags(p)

    p = sub.add_parser("compare", help="datasets x discretizers accuracy table")
    p.add_argument("--algos", type=_algo_list, default=["modified-mil", "mil", "mdlp"])
    p.add_argument("--datasets", default=None, help="comma-separated subset of manifest names")
    _add_discretizer_flags(p)
    _add_eval_flags(p)

    p = sub.add_parser("inspect", help="summarize a scheme file")
    p.add_argument("schemes", type=Path)
    p.add_argument("--emit", type=Path, default=None, help="re-emit the parsed schemes here")
    return parser


def _spec(args, algo):
    return DiscretizerSpec(algo, args.c, args.k, args.bins, args.seed)


def _default_output(path: Path, suffix: str) -> Path:
    return path.with_name(path.stem + suffix)


def cmd_discretize(args):
    dataset = load_dataset(args.input)
    schemes, out = fit_dataset(dataset, _spec(args, args.algo))
    output = args.output or _default_output(args.input, ".disc.csv")
    scheme_path = args.schemes or _default_output(args.input, ".schemes.json")
    output.write_text(dump_csv(out), encoding="utf-8")
    scheme_path.write_text(dumps_schemes(schemes, dataset.class_attribute.name), encoding="utf-8")
    if dataset.dropped_rows:
        print(f"dropped {dataset.dropped_rows} row(s) with a missing class label")
    for s in schemes:
        print(f"{s.attr_name}: NS={len(s.regions)} labels 1..{len(s.regions)}")
    print(f"wrote {output} and {scheme_path}")
    return EXIT_OK


def cmd_apply(args):
    schemes, _ = loads_schemes(args.schemes.read_text(encoding="utf-8"))
    dataset = load_dataset(args.input)
    out = transform_dataset(dataset, schemes)
    output = args.output or _default_output(args.input, ".disc.csv")
    output.write_text(dump_csv(out), encoding="utf-8")
    print(f"wrote {output}")
    return EXIT_OK


def _entries(args, names=None):
    entries = load_manifest(args.manifest)
    if names is None:
        return entries
    known = {e.name: e for e in entries}
    unknown = [n for n in names if n not in known]
    if unknown:
        raise ParameterError(f"not in manifest: {', '.join(unknown)}")
    return [known[n] for n in names]


def _emit(report: EvalReport, args):
    sys.stdout.write(report.render())
    if args.out is not None:
        args.out.write_text(report.to_json(), encoding="utf-8")


def cmd_evaluate(args):
    (entry,) = _entries(args, [args.dataset])
    config = ExperimentConfig(entry, _spec(args, args.algo), args.runs, args.train_fraction,
                              args.seed, args.full)
    row = run_experiment(config, workers=args.workers)
    _emit(EvalReport([row], args.runs, args.train_fraction, args.seed), args)
    return EXIT_OK


def cmd_compare(args):
    names = [n.strip() for n in args.datasets.split(",")] if args.datasets else None
    entries = _entries(args, names)
    specs = [_spec(args, a) for a in args.algos]
    report = compare(entries, specs, args.runs, args.train_fraction, args.seed,
                     args.workers, args.full)
    _emit(report, args)
    return EXIT_OK


def cmd_inspect(args):
    text = args.schemes.read_text(encoding="utf-8")
    schemes, class_attr = loads_schemes(text)
    for s in schemes:
        print(f"{s.attr_name} [{s.algorithm}] d_min={s.d_min!r} d_max={s.d_max!r} "
              f"NS={len(s.regions)}")
        for r in s.regions:
            extra = f" midpoint={r.midpoint!r}" if r.midpoint is not None else ""
            print(f"  {r.label}: [{r.lower!r}, {r.upper!r}) cts={r.total_cts}{extra}")
    if args.emit is not None:
        args.emit.write_text(dumps_schemes(schemes, class_attr), encoding="utf-8")
    return EXIT_OK


COMMANDS = {
    "discretize": cmd_discretize,
    "apply": cmd_apply,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "inspect": cmd_inspect,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"mildisc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, OSError) as exc:
        print(f"mildisc: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ContractError as exc:
        print(f"mildisc: error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
