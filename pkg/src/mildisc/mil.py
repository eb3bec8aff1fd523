"""MIL discretizer: uniform grid, frequency profile, greedy small-region merge.

The pipeline reads a column in four scans: min/max (``init_partition``),
imputation of missing cells, counting per subinterval and label assignment.
The merge in between works on the ``n`` counts only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .dataset import NOMINAL, AttributeSpec, Dataset, column_stats
from .errors import DomainError, ParameterError
from .scheme import AttributeScheme, Region

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class MilParams:
    c: int = 20
    k: int = 3
    seed: int = 0

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 1:
            raise ParameterError(f"c must be a positive integer, got {self.c}")
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError(f"k must be a positive integer, got {self.k}")

    def as_dict(self):
        return {"c": self.c, "k": self.k, "seed": self.seed}


@dataclass(frozen=True)
class InitialPartition:
    d_min: float
    d_max: float
    n: int
    h: float
    ts_base: Fraction
    m: int

    @cached_property
    def bounds(self):
        """Lower bound of every subinterval, followed by ``d_max``.

        Bounds are rounded to 15 significant digits so that grids over decimal
        data land on the decimal points (0.1 + 0.02 is 0.12, not 0.12000000000000001).
        """
        out = [self.d_min]
        for j in range(1, self.n):
            out.append(float(f"{self.d_min + j * self.h:.15g}"))
        out.append(self.d_max)
        return tuple(out)

    def bin_index(self, value) -> int:
        """0-based subinterval of ``value``; half-open, ``d_max`` in the last one.

        Values outside ``[d_min, d_max]`` are clamped to the end subintervals.
        """
        n = self.n
        if self.h == 0 or value >= self.bounds[n - 1]:
            return n - 1
        if value < self.d_min:
            return 0
        b = self.bounds
        j = min(int((value - self.d_min) / self.h), n - 1)
        while j > 0 and value < b[j]:
            j -= 1
        while j < n - 1 and value >= b[j + 1]:
            j += 1
        return j

    def threshold(self, span: int, k: int) -> int:
        """Ceiling of TS/k where TS = span * m / n, in exact integer arithmetic."""
        return -((-span * self.m) // (self.n * k))


@dataclass(frozen=True)
class CtsProfile:
    counts: tuple

    @property
    def n(self):
        return len(self.counts)

    @property
    def total(self):
        return sum(self.counts)


def init_partition(values: Sequence, class_count: int, params: MilParams) -> InitialPartition:
    """Scan 1: range of the column and the uniform initial grid."""
    if class_count < 1:
        raise ParameterError(f"class_count must be >= 1, got {class_count}")
    stats = column_stats(values)
    m = len(values)
    n = max(1, min(params.c * class_count, m - 1))
    h = (stats.d_max - stats.d_min) / n
    return InitialPartition(stats.d_min, stats.d_max, n, h, Fraction(m, n), m)


def _generator(seed, attr_index, row):
    return np.random.default_rng([seed & _SEED_MASK, attr_index, row])


def replace_val(d_min: float, d_max: float, m: int, g: float) -> float:
    return d_min + (d_max - d_min) / m * g


def replacement_value(part: InitialPartition, seed: int, attr_index: int, row: int) -> float:
    """Imputed value for one missing cell, with g drawn from the open interval (1, m)."""
    rng = _generator(seed, attr_index, row)
    g = rng.uniform(1.0, part.m)
    while g <= 1.0:
        g = rng.uniform(1.0, part.m)
    return replace_val(part.d_min, part.d_max, part.m, g)


def impute_missing(values: Sequence, part: InitialPartition, seed: int,
                   attr_index: int = 0) -> list:
    return [replacement_value(part, seed, attr_index, row) if v is None else v
            for row, v in enumerate(values)]


def compute_cts(values: Sequence, part: InitialPartition) -> CtsProfile:
    counts = [0] * part.n
    for v in values:
        if v is None or not part.d_min <= v <= part.d_max:
            raise DomainError(f"value {v!r} outside [{part.d_min}, {part.d_max}]")
        counts[part.bin_index(v)] += 1
    return CtsProfile(tuple(counts))


def _imputations(values, part, seed, attr_index) -> dict:
    # Only the missing cells are stored, so extra space is O(n + missing).
    return {row: replacement_value(part, seed, attr_index, row)
            for row, v in enumerate(values) if v is None}


def _count(values, part, imputed) -> CtsProfile:
    counts = [0] * part.n
    bin_index = part.bin_index
    for row, v in enumerate(values):
        counts[bin_index(imputed[row] if v is None else v)] += 1
    return CtsProfile(tuple(counts))


def regions_from_runs(runs, part: InitialPartition) -> list:
    """Build labelled regions from ``(first_subinterval, span, total)`` runs."""
    b = part.bounds
    regions = []
    for label, (start, span, total) in enumerate(runs, start=1):
        last = label == len(runs)
        upper = math.inf if last else b[start + span]
        regions.append(Region(b[start], upper, label, total, span))
    return regions


def merge_mil(cts: CtsProfile, part: InitialPartition, params: MilParams) -> list:
    """Scan 3: greedy left-to-right merge of under-populated regions.

    The current region absorbs the next subinterval while its total is
    below ceil(span * (m / n) / k); otherwise it is finalized and a new region
    starts at the next subinterval. The trailing region is always closed with
    the last label and an open upper bound.
    """
    counts = cts.counts
    if len(counts) != part.n:
        raise ParameterError("CTS profile does not match the partition")
    runs = []
    start, span, total = 0, 1, counts[0]
    for j in range(1, part.n):
        if total < part.threshold(span, params.k):
            span += 1
            total += counts[j]
        else:
            runs.append((start, span, total))
            start, span, total = j, 1, counts[j]
    runs.append((start, span, total))
    return regions_from_runs(runs, part)


MergeFn = Callable[[CtsProfile, InitialPartition, MilParams], list]


def run_pipeline(values: Sequence, class_count: int, params: MilParams, merge: MergeFn,
                 algorithm: str, attr_index: int = 0, name: str = "",
                 scans: list | None = None):
    """Four-scan discretization of one column with a pluggable merge step.

    ``scans`` receives one entry per pass over the column.
    """
    scans = [] if scans is None else scans
    part = init_partition(values, class_count, params)
    scans.append("range")
    imputed = _imputations(values, part, params.seed, attr_index)
    scans.append("impute")
    cts = _count(values, part, imputed)
    scans.append("cts")
    regions = merge(cts, part, params)

    label_of_bin = [0] * part.n
    j = 0
    for r in regions:
        for _ in range(r.span):
            label_of_bin[j] = r.label
            j += 1
    bin_index = part.bin_index
    labels = [label_of_bin[bin_index(imputed[row] if v is None else v)]
              for row, v in enumerate(values)]
    scans.append("assign")

    scheme = AttributeScheme(name, part.d_min, part.d_max, tuple(regions), algorithm,
                             {**params.as_dict(), "n": part.n})
    return scheme, labels


def discretize_attribute(values: Sequence, class_count: int, params: MilParams = MilParams(),
                         attr_index: int = 0, name: str = "", scans: list | None = None):
    """MIL-discretize one column; returns ``(scheme, labels)``."""
    return run_pipeline(values, class_count, params, merge_mil, "mil",
                        attr_index, name, scans)


def discretized_spec(name: str, scheme: AttributeScheme) -> AttributeSpec:
    return AttributeSpec(name, NOMINAL, {str(r.label): r.label for r in scheme.regions})


def replace_columns(dataset: Dataset, columns: dict, schemes: dict) -> Dataset:
    """Swap continuous columns for label columns, keeping column order."""
    attributes = list(dataset.attributes)
    for i, scheme in schemes.items():
        attributes[i] = discretized_spec(attributes[i].name, scheme)
    rows = []
    for r, row in enumerate(dataset.rows):
        rows.append(tuple(columns[i][r] if i in columns else cell for i, cell in enumerate(row)))
    return Dataset(tuple(attributes), tuple(rows), dataset.class_index)


def discretize_dataset(dataset: Dataset, params: MilParams = MilParams(),
                       algorithm: str = "mil"):
    """Discretize every continuous attribute with MIL or modified-MIL.

    Returns the schemes in attribute order and the discretized dataset.
    """
    if algorithm == "mil":
        fn = discretize_attribute
    elif algorithm == "modified-mil":
        from .modified import discretize_attribute_modified as fn
    else:
        raise ParameterError(f"unknown MIL variant {algorithm!r}")
    s = dataset.class_count
    schemes, columns, by_index = [], {}, {}
    for i in dataset.continuous_indices():
        scheme, labels = fn(dataset.column(i), s, params, attr_index=i,
                            name=dataset.attributes[i].name)
        schemes.append(scheme)
        columns[i] = labels
        by_index[i] = scheme
    return schemes, replace_columns(dataset, columns, by_index)
