"""Tabular data model, CSV/ARFF ingestion and stratified splitting.

Cells are stored as ``float`` for continuous attributes, ``int`` codes for
nominal and class attributes, and ``None`` for a missing value.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllMissingError,
    AttributeTypeError,
    EmptyDatasetError,
    ParameterError,
    StructuralError,
    UnsupportedFeatureError,
    UnusableDatasetError,
)

CONTINUOUS = "continuous"
NOMINAL = "nominal"
CLASS = "class"
KINDS = (CONTINUOUS, NOMINAL, CLASS)

MISSING_MARKERS = ("?", "")


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str
    nominal_codes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown attribute kind {self.kind!r}")
        codes = list(self.nominal_codes.values())
        if codes != list(range(1, len(codes) + 1)):
            raise ParameterError(
                f"nominal codes of {self.name!r} must be consecutive from 1")

    @property
    def is_continuous(self):
        return self.kind == CONTINUOUS

    def decode(self, code):
        """Return the original string for a nominal code."""
        for value, c in self.nominal_codes.items():
            if c == code:
                return value
        raise KeyError(code)


@dataclass(frozen=True)
class Dataset:
    attributes: tuple
    rows: tuple
    class_index: int
    # Rows removed at ingestion because the class label was missing.
    dropped_rows: int = field(default=0, compare=False)

    def __post_init__(self):
        arity = len(self.attributes)
        for i, row in enumerate(self.rows):
            if len(row) != arity:
                raise StructuralError(f"expected {arity} cells, got {len(row)}", row=i + 1)
        kinds = [a.kind for a in self.attributes]
        if kinds.count(CLASS) != 1 or kinds[self.class_index] != CLASS:
            raise ParameterError("dataset needs exactly one class attribute at class_index")

    @property
    def m(self):
        return len(self.rows)

    @property
    def class_attribute(self):
        return self.attributes[self.class_index]

    @property
    def class_count(self):
        """Number of class values s, taken from the class attribute's coding."""
        return len(self.class_attribute.nominal_codes)

    @property
    def names(self):
        return [a.name for a in self.attributes]

    def column(self, index):
        return [row[index] for row in self.rows]

    def class_labels(self):
        return self.column(self.class_index)

    def continuous_indices(self):
        return [i for i, a in enumerate(self.attributes) if a.is_continuous]

    def with_rows(self, rows):
        return Dataset(self.attributes, tuple(tuple(r) for r in rows), self.class_index)


@dataclass(frozen=True)
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int
    train_fraction: float


@dataclass(frozen=True)
class AttributeStats:
    d_min: float
    d_max: float
    missing_count: int


# ---------------------------------------------------------------------------
# ingestion

def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    if isinstance(data, str):
        return data
    return data.decode("utf-8-sig")


def _parse_real(cell):
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _is_missing(cell):
    return cell in MISSING_MARKERS


def _build(names, kinds, raw_rows, declared=None) -> Dataset:
    """Turn string rows into a coded Dataset.

    ``declared`` optionally maps column index to an ordered list of nominal
    values (ARFF); other nominal columns are coded by first appearance.
    """
    declared = declared or {}
    class_index = kinds.index(CLASS)
    if not raw_rows:
        raise EmptyDatasetError("no data rows")
    kept = [r for r in raw_rows if not _is_missing(r[class_index])]
    if not kept:
        raise UnusableDatasetError("every row is missing its class label")

    attributes = []
    for j, (name, kind) in enumerate(zip(names, kinds)):
        codes = {}
        if kind != CONTINUOUS:
            values = declared.get(j)
            if values is None:
                values = [r[j] for r in kept if not _is_missing(r[j])]
            for v in values:
                codes.setdefault(v, len(codes) + 1)
        attributes.append(AttributeSpec(name, kind, codes))

    rows = []
    for r in kept:
        out = []
        for j, cell in enumerate(r):
            if _is_missing(cell):
                out.append(None)
            elif kinds[j] == CONTINUOUS:
                value = _parse_real(cell)
                if value is None:
                    raise StructuralError(f"{names[j]!r}: {cell!r} is not a number")
                out.append(value)
            else:
                try:
                    out.append(attributes[j].nominal_codes[cell])
                except KeyError:
                    raise StructuralError(
                        f"{names[j]!r}: undeclared nominal value {cell!r}") from None
        rows.append(tuple(out))
    return Dataset(tuple(attributes), tuple(rows), class_index,
                   dropped_rows=len(raw_rows) - len(kept))


def parse_csv(source, schema_hint: Sequence[str | None] | None = None) -> Dataset:
    """Parse a header-first CSV file into a :class:`Dataset`.

    ``schema_hint`` may fix the kind of any column (``None`` entries are
    inferred). Without a ``"class"`` entry the last column is the class.
    """
    reader = csv.reader(io.StringIO(_read_text(source)))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyDatasetError("empty file, no header row") from None
    names = [h.strip() for h in header]
    raw_rows = []
    for record in reader:
        if not record or all(not c.strip() for c in record) and len(record) == 1:
            continue
        if len(record) != len(names):
            raise StructuralError(
                f"expected {len(names)} cells, got {len(record)}", row=reader.line_num)
        raw_rows.append([c.strip() for c in record])

    if schema_hint is not None and len(schema_hint) != len(names):
        raise ParameterError(
            f"schema_hint has {len(schema_hint)} entries for {len(names)} columns")
    hint = list(schema_hint) if schema_hint is not None else [None] * len(names)
    if hint.count(CLASS) > 1:
        raise ParameterError("schema_hint marks more than one class column")
    if CLASS not in hint:
        hint[-1] = CLASS

    kinds = []
    for j, kind in enumerate(hint):
        if kind is None:
            numeric = all(_parse_real(r[j]) is not None for r in raw_rows if not _is_missing(r[j]))
            kind = CONTINUOUS if numeric else NOMINAL
        elif kind not in KINDS:
            raise ParameterError(f"unknown attribute kind {kind!r}")
        kinds.append(kind)
    return _build(names, kinds, raw_rows)


_ATTRIBUTE_RE = re.compile(r"""@attribute\s+('[^']*'|"[^"]*"|\S+)\s+(.+)$""", re.I)
_NUMERIC_TYPES = ("numeric", "real", "integer")


def _unquote(text):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    return text


def parse_arff(source) -> Dataset:
    """Parse the numeric/nominal subset of ARFF; the last attribute is the class."""
    names, kinds, declared = [], [], {}
    raw_rows = []
    seen_relation = in_data = False
    for lineno, line in enumerate(_read_text(source).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        lower = line.lower()
        if in_data:
            if line.startswith("{"):
                raise StructuralError("sparse ARFF rows are not supported", row=lineno)
            record = next(csv.reader([line], quotechar="'", skipinitialspace=True))
            if len(record) != len(names):
                raise StructuralError(
                    f"expected {len(names)} values, got {len(record)}", row=lineno)
            raw_rows.append([_unquote(c) for c in record])
        elif lower.startswith("@relation"):
            seen_relation = True
        elif lower.startswith("@attribute"):
            if not seen_relation:
                raise StructuralError("@attribute before @relation", row=lineno)
            match = _ATTRIBUTE_RE.match(line)
            if not match:
                raise StructuralError("malformed @attribute line", row=lineno)
            name, kind = _unquote(match.group(1)), match.group(2).strip()
            if kind.startswith("{"):
                if not kind.endswith("}"):
                    raise StructuralError(f"unterminated nominal list for {name!r}", row=lineno)
                values = next(csv.reader([kind[1:-1]], quotechar="'", skipinitialspace=True))
                declared[len(names)] = [_unquote(v) for v in values]
                kinds.append(NOMINAL)
            elif kind.split()[0].lower() in _NUMERIC_TYPES:
                kinds.append(CONTINUOUS)
            elif kind.split()[0].lower() in ("string", "date", "relational"):
                raise UnsupportedFeatureError(name, kind.split()[0].lower())
            else:
                raise StructuralError(f"unknown type {kind!r} for {name!r}", row=lineno)
            names.append(name)
        elif lower.startswith("@data"):
            if not names:
                raise StructuralError("@data before any @attribute", row=lineno)
            in_data = True
        else:
            raise StructuralError(f"unexpected line {line[:40]!r}", row=lineno)
    if not in_data:
        raise StructuralError("missing @data section")
    kinds[-1] = CLASS
    return _build(names, kinds, raw_rows, declared)


def load_dataset(path, schema_hint=None) -> Dataset:
    path = Path(path)
    if path.suffix.lower() == ".arff":
        return parse_arff(path)
    return parse_csv(path, schema_hint)


def dump_csv(dataset: Dataset) -> str:
    """Serialize to CSV text; nominal cells are written as their original strings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(dataset.names)
    for row in dataset.rows:
        out = []
        for attr, cell in zip(dataset.attributes, row):
            if cell is None:
                out.append("?")
            elif attr.is_continuous:
                out.append(repr(float(cell)))
            else:
                out.append(attr.decode(cell))
        writer.writerow(out)
    return buf.getvalue()


def schema_of(dataset: Dataset):
    """Kinds list suitable as ``schema_hint`` for re-parsing ``dump_csv`` output."""
    return [a.kind for a in dataset.attributes]


# ---------------------------------------------------------------------------
# column statistics and splitting

def column_stats(values: Iterable) -> AttributeStats:
    """One pass over a column: min, max and missing count."""
    d_min = math.inf
    d_max = -math.inf
    missing = 0
    for v in values:
        if v is None:
            missing += 1
            continue
        if v < d_min:
            d_min = v
        if v > d_max:
            d_max = v
    if d_min == math.inf:
        raise AllMissingError("every value of the column is missing")
    return AttributeStats(d_min, d_max, missing)


def attribute_stats(dataset: Dataset, attr_index: int) -> AttributeStats:
    attr = dataset.attributes[attr_index]
    if not attr.is_continuous:
        raise AttributeTypeError(f"attribute {attr.name!r} is {attr.kind}, not continuous")
    try:
        return column_stats(dataset.column(attr_index))
    except AllMissingError:
        raise AllMissingError(f"attribute {attr.name!r} has no observed values") from None


def _as_fraction(x) -> Fraction:
    return Fraction(x).limit_denominator(10**9)


def stratified_allocation(class_counts: dict, train_fraction) -> dict:
    """Per-class training quota by largest-remainder rounding.

    Each class gets ``floor(count * f)``; the shortfall to ``round(m * f)`` goes
    one row at a time to the largest fractional parts, ties to the smaller code.
    """
    f = _as_fraction(train_fraction)
    m = sum(class_counts.values())
    quota = {c: math.floor(n * f) for c, n in class_counts.items()}
    target = math.floor(m * f + Fraction(1, 2))
    order = sorted(class_counts, key=lambda c: (-(class_counts[c] * f - quota[c]), c))
    for c in order[: target - sum(quota.values())]:
        quota[c] += 1
    return quota


def stratified_split(dataset: Dataset, train_fraction: float, seed: int) -> SplitPair:
    if not 0 < train_fraction < 1:
        raise ParameterError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    by_class: dict[int, list[int]] = {}
    for i, label in enumerate(dataset.class_labels()):
        by_class.setdefault(label, []).append(i)
    quota = stratified_allocation({c: len(ix) for c, ix in by_class.items()}, train_fraction)

    rng = np.random.default_rng(seed)
    chosen = set()
    for c in sorted(by_class):
        members = by_class[c]
        picks = rng.permutation(len(members))[: quota[c]]
        chosen.update(members[p] for p in picks)
    train = [row for i, row in enumerate(dataset.rows) if i in chosen]
    test = [row for i, row in enumerate(dataset.rows) if i not in chosen]
    return SplitPair(dataset.with_rows(train), dataset.with_rows(test), seed, train_fraction)


# ---------------------------------------------------------------------------
# manifest

@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: Path
    class_index: int = -1
    expected_m: int | None = None
    expected_s: int | None = None
    subsample: int | None = None


def default_manifest_path() -> Path:
    return Path(str(resources.files("mildisc") / "data" / "manifest.json"))


def load_manifest(path=None) -> list[ManifestEntry]:
    path = Path(path) if path is not None else default_manifest_path()
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    entries = doc["datasets"] if isinstance(doc, dict) else doc
    out = []
    for e in entries:
        out.append(ManifestEntry(
            name=e["name"],
            path=(path.parent / e["path"]).resolve(),
            class_index=e.get("class_index", -1),
            expected_m=e.get("expected_m"),
            expected_s=e.get("expected_s"),
            subsample=e.get("subsample"),
        ))
    return out


def load_entry(entry: ManifestEntry, full: bool = False) -> Dataset:
    """Load a manifest entry; large sets are stratified-subsampled unless ``full``."""
    hint = None
    if entry.class_index != -1:
        with open(entry.path, encoding="utf-8") as fh:
            width = len(next(csv.reader(fh)))
        hint = [None] * width
        hint[entry.class_index] = CLASS
    dataset = load_dataset(entry.path, hint)
    if not full and entry.subsample and dataset.m > entry.subsample:
        dataset = stratified_split(dataset, entry.subsample / dataset.m, seed=0).train
    return dataset
