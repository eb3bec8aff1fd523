"""Fit and apply any of the five discretizers over whole datasets."""

from __future__ import annotations

from dataclasses import dataclass

from .baselines import equal_frequency, equal_width, mdlp
from .dataset import Dataset
from .errors import ParameterError, SchemaError
from .mil import (
    MilParams,
    discretize_attribute,
    init_partition,
    impute_missing,
    replace_columns,
)
from .modified import discretize_attribute_modified
from .scheme import ALGORITHMS, apply_column


@dataclass(frozen=True)
class DiscretizerSpec:
    algorithm: str = "modified-mil"
    c: int = 20
    k: int = 3
    bins: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ParameterError(
                f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        MilParams(self.c, self.k, self.seed)
        if int(self.bins) != self.bins or self.bins < 1:
            raise ParameterError(f"bins must be a positive integer, got {self.bins}")

    @property
    def mil_params(self):
        return MilParams(self.c, self.k, self.seed)

    def label(self):
        if self.algorithm in ("mil", "modified-mil"):
            return f"{self.algorithm}(c={self.c},k={self.k})"
        if self.algorithm == "mdlp":
            return "mdlp"
        return f"{self.algorithm}(bins={self.bins})"


def fit_attribute(values, class_labels, class_count, spec: DiscretizerSpec,
                  attr_index=0, name=""):
    """Fit one column; returns ``(scheme, training labels)``."""
    if spec.algorithm == "mil":
        return discretize_attribute(values, class_count, spec.mil_params, attr_index, name)
    if spec.algorithm == "modified-mil":
        return discretize_attribute_modified(values, class_count, spec.mil_params,
                                             attr_index, name)
    # Baselines see the same imputed column as MIL, so only the cut strategy differs.
    part = init_partition(values, class_count, spec.mil_params)
    filled = impute_missing(values, part, spec.seed, attr_index)
    if spec.algorithm == "equal-width":
        scheme = equal_width(filled, spec.bins, name)
    elif spec.algorithm == "equal-frequency":
        scheme = equal_frequency(filled, spec.bins, name)
    else:
        scheme = mdlp(filled, class_labels, name)
    labels, _ = apply_column(scheme, filled)
    return scheme, labels


def fit_dataset(dataset: Dataset, spec: DiscretizerSpec):
    """Fit schemes on every continuous attribute; returns ``(schemes, discretized)``."""
    classes = dataset.class_labels()
    schemes, columns, by_index = [], {}, {}
    for i in dataset.continuous_indices():
        scheme, labels = fit_attribute(dataset.column(i), classes, dataset.class_count, spec,
                                       attr_index=i, name=dataset.attributes[i].name)
        schemes.append(scheme)
        columns[i] = labels
        by_index[i] = scheme
    return schemes, replace_columns(dataset, columns, by_index)


def transform_dataset(dataset: Dataset, schemes) -> Dataset:
    """Discretize unseen data with fitted schemes, matching attributes by name."""
    names = {a.name: i for i, a in enumerate(dataset.attributes)}
    wanted = {s.attr_name for s in schemes}
    missing = sorted(wanted - set(names))
    unexpected = sorted(a.name for a in dataset.attributes
                        if a.is_continuous and a.name not in wanted)
    if missing or unexpected:
        raise SchemaError(missing, unexpected)
    columns, by_index = {}, {}
    for s in schemes:
        i = names[s.attr_name]
        if not dataset.attributes[i].is_continuous:
            raise SchemaError(unexpected=[f"{s.attr_name} (not continuous)"])
        columns[i], _ = apply_column(s, dataset.column(i))
        by_index[i] = s
    return replace_columns(dataset, columns, by_index)
