"""Discretization schemes: ordered labelled regions and their file format."""

from __future__ import annotations

import json
import logging
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import StructuralError

log = logging.getLogger(__name__)

ALGORITHMS = ("mil", "modified-mil", "equal-width", "equal-frequency", "mdlp")
FORMAT_TAG = "mildisc.schemes/1"


@dataclass(frozen=True)
class Region:
    lower: float
    upper: float
    label: int
    total_cts: int
    span: int = 1
    midpoint: float | None = None


@dataclass(frozen=True)
class AttributeScheme:
    attr_name: str
    d_min: float
    d_max: float
    regions: tuple
    algorithm: str
    params: dict = field(default_factory=dict)

    @cached_property
    def _lowers(self):
        return tuple(r.lower for r in self.regions)

    @property
    def labels(self):
        return [r.label for r in self.regions]

    def label_for(self, value):
        """Label of the region containing ``value``.

        Values below ``d_min`` fall into the first region and anything at or
        above the last lower bound into the last one. Missing values map to
        the first region.
        """
        if value is None:
            log.debug("missing value in %r mapped to label 1", self.attr_name)
            return self.regions[0].label
        i = bisect_right(self._lowers, value) - 1
        return self.regions[max(i, 0)].label

    def midpoints(self):
        return [r.midpoint for r in self.regions]


def apply_scheme(scheme: AttributeScheme, value) -> int:
    return scheme.label_for(value)


def apply_column(scheme: AttributeScheme, values):
    """Discretize a whole column; returns ``(labels, missing_count)``."""
    labels = []
    missing = 0
    for v in values:
        if v is None:
            missing += 1
        labels.append(scheme.label_for(v))
    if missing:
        log.info("%d missing value(s) in %r mapped to label 1", missing, scheme.attr_name)
    return labels, missing


def scheme_violations(scheme: AttributeScheme, n: int | None = None, m: int | None = None):
    """Structural invariants every scheme must meet; returns a list of problems."""
    problems = []
    regions = scheme.regions
    if not regions:
        return ["no regions"]
    if regions[0].lower != scheme.d_min:
        problems.append("first region does not start at d_min")
    if regions[-1].upper != math.inf:
        problems.append("last region is not open-ended")
    for a, b in zip(regions, regions[1:]):
        if a.upper != b.lower:
            problems.append(f"gap between labels {a.label} and {b.label}")
        if not a.lower <= a.upper:
            problems.append(f"region {a.label} has lower > upper")
    if [r.label for r in regions] != list(range(1, len(regions) + 1)):
        problems.append("labels are not 1..R in order")
    if any(r.span < 1 for r in regions):
        problems.append("region with span < 1")
    if n is not None and len(regions) > n:
        problems.append(f"{len(regions)} regions exceed n={n}")
    if m is not None and sum(r.total_cts for r in regions) != m:
        problems.append("region counts do not sum to m")
    return problems


# ---------------------------------------------------------------------------
# file format

def _bound_out(x):
    return "inf" if x == math.inf else x


def _bound_in(x):
    return math.inf if x == "inf" else float(x)


def scheme_to_dict(scheme: AttributeScheme) -> dict:
    regions = []
    for r in scheme.regions:
        item = {"lower": r.lower, "upper": _bound_out(r.upper), "label": r.label,
                "total_cts": r.total_cts, "span": r.span}
        if r.midpoint is not None:
            item["midpoint"] = r.midpoint
        regions.append(item)
    return {
        "attribute": scheme.attr_name,
        "algorithm": scheme.algorithm,
        "params": dict(scheme.params),
        "d_min": scheme.d_min,
        "d_max": scheme.d_max,
        "regions": regions,
    }


def scheme_from_dict(doc: dict) -> AttributeScheme:
    try:
        regions = tuple(
            Region(lower=float(r["lower"]), upper=_bound_in(r["upper"]), label=int(r["label"]),
                   total_cts=int(r.get("total_cts", 0)), span=int(r.get("span", 1)),
                   midpoint=r.get("midpoint"))
            for r in doc["regions"])
        if doc["algorithm"] not in ALGORITHMS:
            raise StructuralError(f"unknown algorithm {doc['algorithm']!r}")
        return AttributeScheme(doc["attribute"], float(doc["d_min"]), float(doc["d_max"]),
                               regions, doc["algorithm"], dict(doc.get("params", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed scheme entry: {exc}") from None


def dumps_schemes(schemes, class_attribute: str | None = None) -> str:
    doc = {"format": FORMAT_TAG, "class_attribute": class_attribute,
           "schemes": [scheme_to_dict(s) for s in schemes]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads_schemes(text: str):
    """Parse a scheme file; returns ``(schemes, class_attribute)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"scheme file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "schemes" not in doc:
        raise StructuralError("scheme file lacks a 'schemes' list")
    return [scheme_from_dict(d) for d in doc["schemes"]], doc.get("class_attribute")


def write_schemes(path, schemes, class_attribute=None):
    Path(path).write_text(dumps_schemes(schemes, class_attribute), encoding="utf-8")


def read_schemes(path):
    return loads_schemes(Path(path).read_text(encoding="utf-8"))
