"""Reference discretizers: equal-width, equal-frequency and Fayyad-Irani MDLP."""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from typing import Sequence

from .dataset import column_stats
from .errors import ParameterError
from .scheme import AttributeScheme, Region


def scheme_from_cuts(values: Sequence, cuts, algorithm: str, params: dict,
                     name: str = "") -> AttributeScheme:
    """Regions ``[d_min, c1), [c1, c2), ..., [c_last, inf)`` with training counts."""
    stats = column_stats(values)
    lowers = [stats.d_min] + [c for c in cuts if c > stats.d_min]
    counts = [0] * len(lowers)
    for v in values:
        if v is not None:
            counts[max(bisect_right(lowers, v) - 1, 0)] += 1
    uppers = lowers[1:] + [math.inf]
    regions = tuple(Region(lo, up, i + 1, counts[i])
                    for i, (lo, up) in enumerate(zip(lowers, uppers)))
    return AttributeScheme(name, stats.d_min, stats.d_max, regions, algorithm, params)


def _check_bins(bins):
    if int(bins) != bins or bins < 1:
        raise ParameterError(f"bins must be a positive integer, got {bins}")


def equal_width(values: Sequence, bins: int, name: str = "") -> AttributeScheme:
    _check_bins(bins)
    stats = column_stats(values)
    width = (stats.d_max - stats.d_min) / bins
    cuts = []
    if width > 0:
        cuts = [float(f"{stats.d_min + i * width:.15g}") for i in range(1, bins)]
    return scheme_from_cuts(values, cuts, "equal-width", {"bins": bins, "width": width}, name)


def equal_frequency(values: Sequence, bins: int, name: str = "") -> AttributeScheme:
    """Cuts at the i/bins empirical quantiles.

    Each cut is the midpoint of the two sorted values straddling the quantile
    position; a cut whose straddling values are equal is dropped.
    """
    _check_bins(bins)
    data = sorted(v for v in values if v is not None)
    m = len(data)
    cuts = []
    for i in range(1, bins):
        pos = (i * m) // bins
        if 0 < pos < m and data[pos - 1] < data[pos]:
            cut = (data[pos - 1] + data[pos]) / 2
            if not cuts or cut > cuts[-1]:
                cuts.append(cut)
    return scheme_from_cuts(values, cuts, "equal-frequency", {"bins": bins}, name)


def entropy(counts) -> float:
    total = sum(counts)
    if total == 0:
        return 0.0
    out = 0.0
    for c in counts:
        if c:
            p = c / total
            out -= p * math.log2(p)
    return out


def mdl_accepts(parent: Counter, left: Counter, right: Counter) -> tuple[bool, float]:
    """Fayyad-Irani MDL test for one binary split; returns ``(accepted, gain)``."""
    n = sum(parent.values())
    n1, n2 = sum(left.values()), sum(right.values())
    ent = entropy(parent.values())
    ent1, ent2 = entropy(left.values()), entropy(right.values())
    gain = ent - (n1 / n) * ent1 - (n2 / n) * ent2
    k = sum(1 for c in parent.values() if c)
    k1 = sum(1 for c in left.values() if c)
    k2 = sum(1 for c in right.values() if c)
    delta = math.log2(3**k - 2) - (k * ent - k1 * ent1 - k2 * ent2)
    return gain > (math.log2(n - 1) + delta) / n, gain


def _boundary_positions(pairs, lo, hi):
    """Indices p where a cut between pairs[p-1] and pairs[p] is a boundary point."""
    groups = []  # (start index, set of classes) per distinct value
    for p in range(lo, hi):
        v, y = pairs[p]
        if groups and pairs[groups[-1][0]][0] == v:
            groups[-1][1].add(y)
        else:
            groups.append((p, {y}))
    out = []
    for (_, a), (start, b) in zip(groups, groups[1:]):
        if not (len(a) == 1 and a == b):
            out.append(start)
    return out


def _best_split(pairs, lo, hi):
    parent = Counter(y for _, y in pairs[lo:hi])
    n = hi - lo
    best = None
    left = Counter()
    right = Counter(parent)
    prev = lo
    for p in _boundary_positions(pairs, lo, hi):
        for _, y in pairs[prev:p]:
            left[y] += 1
            right[y] -= 1
        prev = p
        n1 = p - lo
        e = (n1 / n) * entropy(left.values()) + ((n - n1) / n) * entropy(right.values())
        if best is None or e < best[0]:
            best = (e, p, Counter(left), Counter(right))
    return parent, best


def mdlp(values: Sequence, class_labels: Sequence, name: str = "") -> AttributeScheme:
    """Recursive minimum-entropy binary splitting with the MDL stopping rule."""
    if len(values) != len(class_labels):
        raise ParameterError(
            f"{len(values)} values but {len(class_labels)} class labels")
    pairs = sorted((v, y) for v, y in zip(values, class_labels) if v is not None)
    cuts = []
    stack = [(0, len(pairs))]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        parent, best = _best_split(pairs, lo, hi)
        if best is None:
            continue
        _, p, left, right = best
        accepted, _ = mdl_accepts(parent, left, right)
        if accepted:
            cuts.append((pairs[p - 1][0] + pairs[p][0]) / 2)
            stack.append((lo, p))
            stack.append((p, hi))
    return scheme_from_cuts(values, sorted(cuts), "mdlp", {}, name)
