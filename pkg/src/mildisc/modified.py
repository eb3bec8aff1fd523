"""Modified MIL: the MIL small-region rule plus a similarity merge.

Adjacent subintervals whose raw counts satisfy
``0.75 * counts[i+1] <= counts[i] <= 1.25 * counts[i+1]`` are merged as well,
unless the current region's latest absorption came from the small-region rule.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .mil import (
    CtsProfile,
    InitialPartition,
    MilParams,
    regions_from_runs,
    run_pipeline,
)
from .errors import ParameterError

SMALL = "small"
SIMILAR = "similar"
FINALIZE = "finalize"


@dataclass
class ModifiedMergeState:
    current_region_start: int
    tot_cts: int
    ts_span: int  # TS = ts_span * m / n
    last_small_merge: bool = False
    span: int = 1


@dataclass(frozen=True)
class RegionRepresentative:
    region_label: int
    midpoint: float


def similar(a: int, b: int) -> bool:
    """``0.75*b <= a <= 1.25*b`` on integer counts, scaled by 4."""
    return 3 * b <= 4 * a <= 5 * b


def merge_modified(cts: CtsProfile, part: InitialPartition, params: MilParams,
                   trace: list | None = None) -> list:
    """Modified-MIL merge over the CTS profile.

    ``trace`` (if given) receives ``(rule, subinterval)`` pairs, one per
    step, where ``subinterval`` is the 0-based index absorbed or started.
    """
    counts = cts.counts
    if len(counts) != part.n:
        raise ParameterError("CTS profile does not match the partition")
    trace = [] if trace is None else trace
    runs = []
    st = ModifiedMergeState(0, counts[0], 1)
    for i in range(part.n - 1):
        nxt = i + 1
        if st.tot_cts < part.threshold(st.ts_span, params.k):
            st.tot_cts += counts[nxt]
            st.ts_span += 1
            st.span += 1
            st.last_small_merge = True
            trace.append((SMALL, nxt))
        elif not st.last_small_merge and similar(counts[i], counts[nxt]):
            # TS is left unchanged on a similarity merge.
            st.tot_cts += counts[nxt]
            st.span += 1
            trace.append((SIMILAR, nxt))
        else:
            runs.append((st.current_region_start, st.span, st.tot_cts))
            st = ModifiedMergeState(nxt, counts[nxt], 1)
            trace.append((FINALIZE, nxt))
    runs.append((st.current_region_start, st.span, st.tot_cts))
    return regions_from_runs(runs, part)


def region_representatives(regions, part: InitialPartition) -> list:
    return [RegionRepresentative(r.label, (r.lower + min(r.upper, part.d_max)) / 2)
            for r in regions]


def _merge_with_midpoints(cts, part, params):
    regions = merge_modified(cts, part, params)
    reps = region_representatives(regions, part)
    return [replace(r, midpoint=rep.midpoint) for r, rep in zip(regions, reps)]


def discretize_attribute_modified(values: Sequence, class_count: int,
                                  params: MilParams = MilParams(), attr_index: int = 0,
                                  name: str = "", scans: list | None = None):
    """Modified-MIL counterpart of :func:`mildisc.mil.discretize_attribute`.

    Cells receive ordinal region labels; each region's midpoint is kept in
    the scheme for callers who want a numeric representative.
    """
    return run_pipeline(values, class_count, params, _merge_with_midpoints, "modified-mil",
                        attr_index, name, scans)
