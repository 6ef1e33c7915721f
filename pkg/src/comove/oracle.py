"""Brute-force reference implementations and random matrix generators.

The functions here are deliberately naive: they enumerate candidate itemsets
or object subsets exhaustively and apply the definitions directly, without
sharing any code with the production miner or pattern decoders.  They exist so
the fast paths can be checked against an independent computation on small
inputs; size guards keep them from being misused on anything big.
"""

from __future__ import annotations

import numpy as np

from .model import (
    FCI,
    ClosedSwarm,
    ClusterId,
    ClusterMatrix,
    Column,
    Convoy,
    GroupPattern,
    MiningParams,
    SizeGuardError,
    Tidset,
)

__all__ = [
    "brute_fcis",
    "brute_closed_swarms",
    "brute_convoys",
    "brute_group_patterns",
    "gen_random_matrix",
    "gen_random_nested_matrix",
]

MAX_BRUTE_COLUMNS = 24
MAX_BRUTE_OBJECTS = 12


def brute_fcis(matrix: ClusterMatrix, epsilon: int) -> list[FCI]:
    """All frequent closed itemsets by explicit enumeration.

    Walks every itemset that uses at most one column per time unit and has
    support >= epsilon, then keeps those with no single-column extension
    preserving the tidset.  (A strict valid superset with an equal tidset
    exists iff a single-column one does, since intersecting with a superset
    column never shrinks the tidset below the target.)
    """
    cols = matrix.columns
    if len(cols) > MAX_BRUTE_COLUMNS:
        raise SizeGuardError(
            f"brute_fcis refuses {len(cols)} columns (max {MAX_BRUTE_COLUMNS})")
    n = len(cols)
    found: list[tuple[tuple[int, ...], int]] = []

    def walk(start: int, chosen: tuple[int, ...], mask: int, used_times: frozenset):
        if chosen:
            found.append((chosen, mask))
        for j in range(start, n):
            cid, members = cols[j]
            if cid.time in used_times:
                continue
            m2 = mask & members.mask
            if m2.bit_count() >= epsilon:
                walk(j + 1, chosen + (j,), m2, used_times | {cid.time})

    full = (1 << matrix.n_objects) - 1
    walk(0, (), full, frozenset())

    out = []
    for chosen, mask in found:
        times_used = {cols[j].cid.time for j in chosen}
        in_set = set(chosen)
        closed = True
        for j in range(n):
            if j in in_set or cols[j].cid.time in times_used:
                continue
            if mask & cols[j].members.mask == mask:
                closed = False
                break
        if closed:
            items = tuple(sorted(cols[j].cid for j in chosen))
            out.append(FCI(items, Tidset(mask)))
    out.sort(key=lambda f: f.items)
    return out


def _guard_objects(matrix: ClusterMatrix, who: str):
    if matrix.n_objects > MAX_BRUTE_OBJECTS:
        raise SizeGuardError(
            f"{who} refuses {matrix.n_objects} objects (max {MAX_BRUTE_OBJECTS})")


def _time_masks(matrix: ClusterMatrix) -> list[list[int]]:
    """Column membership masks grouped by time index."""
    per_time: list[list[int]] = [[] for _ in range(matrix.n_times)]
    for cid, members in matrix.columns:
        per_time[cid.time].append(members.mask)
    return per_time


def _covered_times(per_time: list[list[int]], obj_mask: int) -> list[int]:
    return [t for t, masks in enumerate(per_time)
            if any(m & obj_mask == obj_mask for m in masks)]


def _runs(times: list[int]) -> list[tuple[int, int]]:
    """Maximal consecutive runs in an ascending list of time indices."""
    runs = []
    for t in times:
        if runs and t == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], t)
        else:
            runs.append((t, t))
    return runs


def brute_closed_swarms(matrix: ClusterMatrix, epsilon: int, min_t: int) -> list[ClosedSwarm]:
    """Closed swarms by enumerating every object subset.

    A subset O qualifies with its full covered-time set T(O) when |O| >=
    epsilon, |T(O)| >= min_t, and no further object is in a shared cluster at
    every t in T(O).  Time-maximality is built in by taking T(O) whole.
    """
    _guard_objects(matrix, "brute_closed_swarms")
    per_time = _time_masks(matrix)
    n = matrix.n_objects
    out = []
    for obj_mask in range(1, 1 << n):
        if obj_mask.bit_count() < epsilon:
            continue
        covered = _covered_times(per_time, obj_mask)
        if len(covered) < min_t:
            continue
        grown = False
        for o in range(n):
            if (obj_mask >> o) & 1:
                continue
            bigger = obj_mask | (1 << o)
            if all(any(m & bigger == bigger for m in per_time[t]) for t in covered):
                grown = True
                break
        if not grown:
            out.append(ClosedSwarm(Tidset(obj_mask), tuple(covered)))
    out.sort(key=lambda s: (s.objects.ids, s.times))
    return out


def _guarded_runs(per_time: list[list[int]], obj_mask: int, min_t: int) -> list[tuple[int, int]]:
    """Maximal consecutive covered runs where obj_mask equals the intersection
    of the covering columns (i.e. no larger group rides the same clusters)."""
    covered = _covered_times(per_time, obj_mask)
    kept = []
    for a, b in _runs(covered):
        if b - a + 1 < min_t:
            continue
        inter = -1
        for t in range(a, b + 1):
            cover = next(m for m in per_time[t] if m & obj_mask == obj_mask)
            inter &= cover
        if inter == obj_mask:
            kept.append((a, b))
    return kept


def brute_convoys(matrix: ClusterMatrix, epsilon: int, min_t: int) -> list[Convoy]:
    """Convoys by object-subset enumeration: for each subset at least epsilon
    strong, every maximal consecutive run of length >= min_t over which the
    subset is exactly the set of objects sharing those clusters."""
    _guard_objects(matrix, "brute_convoys")
    per_time = _time_masks(matrix)
    out = []
    for obj_mask in range(1, 1 << matrix.n_objects):
        if obj_mask.bit_count() < epsilon:
            continue
        for a, b in _guarded_runs(per_time, obj_mask, min_t):
            out.append(Convoy(Tidset(obj_mask), a, b))
    out.sort(key=lambda c: (c.objects.ids, c.start, c.end))
    return out


def brute_group_patterns(matrix: ClusterMatrix, params: MiningParams) -> list[GroupPattern]:
    """Group patterns by object-subset enumeration: segments are the guarded
    consecutive runs (as for convoys); a subset qualifies when it has at least
    min_c segments covering at least min_wei of the whole time span."""
    _guard_objects(matrix, "brute_group_patterns")
    per_time = _time_masks(matrix)
    n_times = matrix.n_times
    out = []
    for obj_mask in range(1, 1 << matrix.n_objects):
        if obj_mask.bit_count() < params.epsilon:
            continue
        segs = _guarded_runs(per_time, obj_mask, params.min_t)
        if len(segs) < params.min_c:
            continue
        weight = sum(b - a + 1 for a, b in segs) / n_times
        if weight >= params.min_wei:
            out.append(GroupPattern(Tidset(obj_mask), tuple(segs), weight))
    out.sort(key=lambda g: (g.objects.ids, g.segments))
    return out


# ---------------------------------------------------------------------------
# Random matrix generators (for randomized cross-checks)
# ---------------------------------------------------------------------------

def gen_random_matrix(rng: np.random.Generator, max_objects: int = 8,
                      max_times: int = 10, max_clusters: int = 3) -> ClusterMatrix:
    """A random small per-timestamp matrix: each timestamp gets 0..max_clusters
    disjoint clusters over a random assignment of objects (singletons allowed,
    objects may be unassigned)."""
    n_obj = int(rng.integers(2, max_objects + 1))
    n_times = int(rng.integers(1, max_times + 1))
    labels = tuple(f"o{i + 1}" for i in range(n_obj))
    columns = []
    for t in range(n_times):
        k = int(rng.integers(0, max_clusters + 1))
        if k == 0:
            continue
        slots = rng.integers(0, k + 1, size=n_obj)  # 0 = unclustered
        groups: dict[int, int] = {}
        for o, s in enumerate(slots):
            if s > 0:
                groups[int(s)] = groups.get(int(s), 0) | (1 << o)
        masks = sorted(groups.values(), key=lambda m: (m & -m).bit_length())
        for ordinal, m in enumerate(masks):
            columns.append(Column(ClusterId(t, ordinal), Tidset(m)))
    return ClusterMatrix.build(labels, tuple(range(n_times)), columns)


def gen_random_nested_matrix(rng: np.random.Generator, max_objects: int = 10,
                             max_columns: int = 8) -> ClusterMatrix:
    """A random matrix whose columns form a nested chain (each column's tidset
    contains the next one's), one column per timestamp, repeats allowed."""
    n_obj = int(rng.integers(1, max_objects + 1))
    labels = tuple(f"o{i + 1}" for i in range(n_obj))
    n_cols = int(rng.integers(1, max_columns + 1))
    mask = int(rng.integers(1, 1 << n_obj))
    masks = [mask]
    while len(masks) < n_cols:
        if rng.random() < 0.3:
            masks.append(mask)  # equal columns are legal in a nested chain
            continue
        nxt = mask & int(rng.integers(1, 1 << n_obj))
        if nxt == 0:
            break
        mask = nxt
        masks.append(mask)
    columns = [Column(ClusterId(t, 0), Tidset(m)) for t, m in enumerate(masks)]
    return ClusterMatrix.build(labels, tuple(range(len(masks))), columns)
