"""Repeated random-split evaluation of discretizers with the surrogate tree."""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .dataset import Dataset, ManifestEntry, load_entry, stratified_split
from .errors import MildiscError, ParameterError
from .pipeline import DiscretizerSpec, fit_dataset, transform_dataset
from .tree import accuracy, train_tree


class ExperimentError(MildiscError):
    def __init__(self, run, cause):
        super().__init__(f"run {run}: {type(cause).__name__}: {cause}")
        self.run = run
        self.cause = cause


CLASSIFIER_NOTE = (
    "Classifier: unpruned multiway gain-ratio decision tree (in-package surrogate for "
    "WEKA J48); absolute accuracies are not comparable to J48 results. "
    "s.d. is the population standard deviation over runs."
)


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_ref: ManifestEntry | None
    discretizer: DiscretizerSpec = DiscretizerSpec()
    runs: int = 50
    train_fraction: float = 0.30
    master_seed: int = 0
    full: bool = False

    def __post_init__(self):
        if int(self.runs) != self.runs or self.runs < 1:
            raise ParameterError(f"runs must be a positive integer, got {self.runs}")
        if not 0 < self.train_fraction < 1:
            raise ParameterError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")


@dataclass
class EvalRow:
    dataset: str
    discretizer: str
    mean_acc: float | None
    sd: float | None
    runs: int
    per_run_accuracies: list = field(default_factory=list)
    error: str | None = None

    def cell(self):
        if self.error is not None:
            return f"error: {self.error}"
        return f"{self.mean_acc:.2f} ± {self.sd:.2f}"


@dataclass
class EvalReport:
    rows: list
    runs: int
    train_fraction: float
    master_seed: int
    note: str = CLASSIFIER_NOTE

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def render(self) -> str:
        return render_table(self)


def run_seeds(master_seed: int, run: int):
    """Split seed and discretizer seed for one run; depends only on (master_seed, run)."""
    state = np.random.SeedSequence([master_seed & ((1 << 64) - 1), run]).generate_state(2)
    return int(state[0]), int(state[1])


def single_run(dataset: Dataset, spec: DiscretizerSpec, train_fraction: float,
               master_seed: int, run: int) -> float:
    split_seed, disc_seed = run_seeds(master_seed, run)
    split = stratified_split(dataset, train_fraction, split_seed)
    try:
        schemes, train = fit_dataset(split.train, replace(spec, seed=disc_seed))
        test = transform_dataset(split.test, schemes)
        return accuracy(train_tree(train), test)
    except MildiscError as exc:
        raise ExperimentError(run, exc) from exc


def _run_star(args):
    return single_run(*args)


def run_experiment(config: ExperimentConfig, dataset: Dataset | None = None,
                   workers: int = 1) -> EvalRow:
    """Evaluate one discretizer on one dataset over ``config.runs`` random splits.

    Schemes are refit on every run's training split only; the test split is
    discretized with them.
    """
    if dataset is None:
        if config.dataset_ref is None:
            raise ParameterError("no dataset given")
        dataset = load_entry(config.dataset_ref, full=config.full)
    name = config.dataset_ref.name if config.dataset_ref is not None else "dataset"
    jobs = [(dataset, config.discretizer, config.train_fraction, config.master_seed, r)
            for r in range(1, config.runs + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            accs = list(pool.map(_run_star, jobs))
    else:
        accs = [_run_star(j) for j in jobs]
    return EvalRow(name, config.discretizer.label(), statistics.fmean(accs),
                   statistics.pstdev(accs), config.runs, accs)


def compare(entries, discretizers, runs=50, train_fraction=0.30, master_seed=0,
            workers=1, full=False) -> EvalReport:
    """Datasets x discretizers grid; a failing cell records its error and the rest still run."""
    if not discretizers:
        raise ParameterError("at least one discretizer is required")
    rows = []
    for entry in entries:
        try:
            dataset = load_entry(entry, full=full)
        except (OSError, MildiscError) as exc:
            for spec in discretizers:
                rows.append(EvalRow(entry.name, spec.label(), None, None, runs,
                                    error=_describe(exc)))
            continue
        for spec in discretizers:
            config = ExperimentConfig(entry, spec, runs, train_fraction, master_seed, full)
            try:
                rows.append(run_experiment(config, dataset, workers))
            except MildiscError as exc:
                rows.append(EvalRow(entry.name, spec.label(), None, None, runs,
                                    error=_describe(exc)))
    return EvalReport(rows, runs, train_fraction, master_seed)


def _describe(exc):
    if isinstance(exc, FileNotFoundError):
        return f"dataset file not found: {exc.filename}"
    return f"{type(exc).__name__}: {exc}"


def render_table(report: EvalReport) -> str:
    """Plain-text grid: one row per dataset, one ``acc ± s.d.`` column per discretizer."""
    datasets, columns = [], []
    cells = {}
    for row in report.rows:
        if row.dataset not in datasets:
            datasets.append(row.dataset)
        if row.discretizer not in columns:
            columns.append(row.discretizer)
        cells[row.dataset, row.discretizer] = row.cell()
    header = ["Problem Name"] + [f"{c} (acc ± s.d.)" for c in columns]
    body = [[d] + [cells.get((d, c), "") for c in columns] for d in datasets]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = [
        "Accuracy (%) over {} runs, {:.0f}% training split, seed {}".format(
            report.runs, report.train_fraction * 100, report.master_seed),
        report.note,
        "",
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for r in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"
