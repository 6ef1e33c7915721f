"""Decoding mined closed itemsets into co-movement patterns.

Every extractor takes an FCI plus an :class:`ExtractionContext` carrying the
matrix the itemset was mined from (pattern shape depends on the full column
tidsets, not just the itemset) and the thresholds.  ``extract_patterns`` is
the all-in-one entry point used by the pipeline.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .model import (
    FCI,
    ClosedSwarm,
    ClusterId,
    ClusterMatrix,
    Convoy,
    GroupPattern,
    MatrixKindError,
    MiningParams,
    MovingCluster,
    Pattern,
    PeriodicPattern,
    Tidset,
    UniverseError,
    canonical_sort,
)

__all__ = [
    "ExtractionContext",
    "closed_swarm_of",
    "convoys_of",
    "moving_clusters_of",
    "group_pattern_of",
    "periodic_pattern_of",
    "extract_patterns",
]


class ExtractionContext:
    """Matrix + parameters shared by the pattern extractors."""

    def __init__(self, matrix: ClusterMatrix, params: MiningParams):
        self.matrix = matrix
        self.params = params
        self._columns: dict[ClusterId, Tidset] | None = None

    @property
    def n_times(self) -> int:
        return self.matrix.n_times

    def column_tidset(self, cid: ClusterId) -> Tidset:
        if self._columns is None:
            self._columns = self.matrix.column_map()
        try:
            return self._columns[cid]
        except KeyError:
            raise UniverseError(
                f"itemset references column {cid} absent from the matrix") from None


def _sorted_items(fci: FCI) -> list[ClusterId]:
    return sorted(fci.items, key=lambda c: c.time)


def _consecutive_runs(items: Sequence[ClusterId]) -> list[list[ClusterId]]:
    runs: list[list[ClusterId]] = []
    for it in items:
        if runs and it.time == runs[-1][-1].time + 1:
            runs[-1].append(it)
        else:
            runs.append([it])
    return runs


def closed_swarm_of(fci: FCI, ctx: ExtractionContext) -> ClosedSwarm | None:
    """The swarm form of a closed itemset: its objects over its item times.
    None when fewer than min_t timestamps are involved."""
    times = tuple(sorted({it.time for it in fci.items}))
    if len(times) < ctx.params.min_t:
        return None
    return ClosedSwarm(fci.tidset, times)


def _guarded_segments(fci: FCI, ctx: ExtractionContext) -> list[tuple[int, int]]:
    """Maximal consecutive item runs of length >= min_t over which the FCI's
    objects are exactly the objects sharing those clusters (the intersection
    of the full column tidsets adds nobody)."""
    segments = []
    for run in _consecutive_runs(_sorted_items(fci)):
        if len(run) < ctx.params.min_t:
            continue
        inter = -1
        for it in run:
            inter &= ctx.column_tidset(it).mask
        if inter == fci.tidset.mask:
            segments.append((run[0].time, run[-1].time))
    return segments


def convoys_of(fci: FCI, ctx: ExtractionContext) -> list[Convoy]:
    """Convoys inside a closed itemset: one per guarded consecutive run."""
    return [Convoy(fci.tidset, a, b) for a, b in _guarded_segments(fci, ctx)]


def moving_clusters_of(fci: FCI, ctx: ExtractionContext) -> list[MovingCluster]:
    """Moving clusters inside a closed itemset: maximal consecutive chains of
    its clusters whose adjacent full tidsets overlap by at least theta
    (Jaccard).  Chains need at least two clusters (and at least min_t)."""
    theta = ctx.params.theta
    min_len = max(2, ctx.params.min_t)
    out = []
    for run in _consecutive_runs(_sorted_items(fci)):
        chain: list[ClusterId] = [run[0]]
        for prev, cur in zip(run, run[1:]):
            a = ctx.column_tidset(prev).mask
            b = ctx.column_tidset(cur).mask
            jaccard = (a & b).bit_count() / (a | b).bit_count()
            if jaccard >= theta:
                chain.append(cur)
            else:
                if len(chain) >= min_len:
                    out.append(chain)
                chain = [cur]
        if len(chain) >= min_len:
            out.append(chain)
    result = []
    for chain in out:
        core = -1
        for it in chain:
            core &= ctx.column_tidset(it).mask
        result.append(MovingCluster(tuple(chain), Tidset(core)))
    return result


def group_pattern_of(fci: FCI, ctx: ExtractionContext) -> GroupPattern | None:
    """The group pattern of a closed itemset: its guarded runs as segments,
    kept when there are at least min_c of them covering at least min_wei of
    the whole time span."""
    segments = _guarded_segments(fci, ctx)
    if len(segments) < ctx.params.min_c:
        return None
    weight = sum(b - a + 1 for a, b in segments) / ctx.n_times
    if weight < ctx.params.min_wei:
        return None
    return GroupPattern(fci.tidset, tuple(segments), weight)


def periodic_pattern_of(fci: FCI, ctx: ExtractionContext) -> PeriodicPattern | None:
    """Swarm over a periodic matrix: sub-trajectories sharing clusters at the
    listed period offsets."""
    times = tuple(sorted({it.time for it in fci.items}))
    if len(times) < ctx.params.min_t:
        return None
    return PeriodicPattern(fci.tidset, times)


def extract_patterns(fcis: Iterable[FCI], ctx: ExtractionContext) -> list[Pattern]:
    """Decode a set of closed itemsets into every pattern kind the matrix
    supports, deduplicated and canonically ordered.

    Periodic matrices yield periodic patterns only; per-timestamp matrices
    yield closed swarms, convoys, moving clusters and group patterns.
    Closed-itemset matrices cannot be decoded (their columns are block-level
    itemsets, not clusters at timestamps).
    """
    kind = ctx.matrix.kind
    if kind == "closed-itemset":
        raise MatrixKindError(
            "patterns cannot be extracted from a closed-itemset matrix; "
            "decode against the originating per-timestamp matrix instead")
    patterns: list[Pattern] = []
    if kind == "periodic":
        for fci in fcis:
            p = periodic_pattern_of(fci, ctx)
            if p is not None:
                patterns.append(p)
        return canonical_sort(patterns)
    movers: set[MovingCluster] = set()
    for fci in fcis:
        s = closed_swarm_of(fci, ctx)
        if s is not None:
            patterns.append(s)
        patterns.extend(convoys_of(fci, ctx))
        movers.update(moving_clusters_of(fci, ctx))
        g = group_pattern_of(fci, ctx)
        if g is not None:
            patterns.append(g)
    patterns.extend(movers)
    return canonical_sort(patterns)
