"""Shared builders for the test suite.

``make_matrix`` turns a {(time, ordinal): member-ids} dict into a small
cluster matrix with an explicit time axis — passing ``n_times`` matters
whenever empty timestamps are part of the scenario (weights and consecutive
runs see them).  The named builders below are the handful of small scenarios
that several test modules share.
"""

from __future__ import annotations

from comove import ClusterId, ClusterMatrix, Column, Tidset


def make_matrix(cells: dict, n_objects: int | None = None,
                n_times: int | None = None, kind: str = "per-timestamp",
                labels: tuple | None = None) -> ClusterMatrix:
    cols = [Column(ClusterId(t, o), Tidset.from_ids(ids))
            for (t, o), ids in sorted(cells.items())]
    if n_objects is None:
        n_objects = 1 + max(i for c in cols for i in c.members.ids)
    if labels is None:
        labels = tuple(f"o{i + 1}" for i in range(n_objects))
    if n_times is None:
        n_times = 1 + max(c.cid.time for c in cols)
    return ClusterMatrix.build(labels, tuple(range(n_times)), cols, kind=kind)


def pair_with_gap_matrix() -> ClusterMatrix:
    """Two objects share a cluster at times 0, 2, 3 and are apart at time 1:
    the minimal shape whose only closed swarm is non-consecutive."""
    return make_matrix({(0, 0): [0, 1], (2, 0): [0, 1], (3, 0): [0, 1]},
                       n_times=4)


def expanding_trio_matrix() -> ClusterMatrix:
    """A pair travels together the whole time; a third object joins their
    cluster for the last two timestamps.  Yields exactly two convoys."""
    return make_matrix({(0, 0): [0, 1], (1, 0): [0, 1],
                        (2, 0): [0, 1, 2], (3, 0): [0, 1, 2]})


def two_stint_matrix() -> ClusterMatrix:
    """A pair rides together at times 0-1 and 3-4 with a gap at time 2, over
    a five-timestamp span: the canonical group-pattern shape (weight 4/5)."""
    return make_matrix({(0, 0): [0, 1], (1, 0): [0, 1],
                        (3, 0): [0, 1], (4, 0): [0, 1]}, n_times=5)


def three_column_matrix() -> ClusterMatrix:
    """Five objects, three timestamps, one cluster each: {o1,o2,o3}, {o1,o2},
    {o1,o2,o3}.  o4 and o5 exist but never cluster.  At epsilon=2 the closed
    itemsets are exactly {(0,0),(2,0)} with tidset {0,1,2} and
    {(0,0),(1,0),(2,0)} with tidset {0,1}."""
    return make_matrix({(0, 0): [0, 1, 2], (1, 0): [0, 1], (2, 0): [0, 1, 2]},
                       n_objects=5)


def uniform_periodic_matrix() -> ClusterMatrix:
    """Three sub-trajectories sharing one cluster at every of three offsets."""
    return make_matrix({(0, 0): [0, 1, 2], (1, 0): [0, 1, 2],
                        (2, 0): [0, 1, 2]}, kind="periodic")
