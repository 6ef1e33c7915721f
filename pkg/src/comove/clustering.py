"""Per-snapshot density clustering and cluster-matrix construction.

The clustering is deliberately written out by hand rather than delegated:
the rest of the pipeline needs byte-identical output across runs and thread
counts, which pins down details most libraries leave open — seeds are tried
in ascending object id, neighborhoods are closed balls, a border point joins
the first cluster that reaches it, and clusters are numbered by their
smallest member.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ingest import TrajectoryDB
from .model import (
    ClusterId,
    ClusterMatrix,
    Column,
    MatrixKindError,
    ParameterError,
    Tidset,
)

__all__ = ["DbscanParams", "dbscan_snapshot", "build_cluster_matrix"]


@dataclass(frozen=True)
class DbscanParams:
    """Density parameters: eps is the neighborhood radius (closed ball,
    Euclidean), min_pts the minimum neighborhood size for a core point,
    counting the point itself.  min_pts >= 2, so an isolated point is always
    noise, never a singleton cluster."""

    eps: float = 0.001
    min_pts: int = 2

    def __post_init__(self):
        if not (isinstance(self.eps, (int, float)) and math.isfinite(self.eps)
                and self.eps > 0):
            raise ParameterError(f"eps must be a finite number > 0, got {self.eps!r}")
        if not isinstance(self.min_pts, int) or self.min_pts < 2:
            raise ParameterError(f"min_pts must be an int >= 2, got {self.min_pts!r}")


def dbscan_snapshot(ids, points: np.ndarray, params: DbscanParams) -> list[Tidset]:
    """Cluster one timestamp's positions; returns member tidsets ordered by
    smallest member id.  ``ids`` are the object indices (parallel to the rows
    of ``points``); points too sparse to join any cluster yield nothing.
    """
    ids = np.asarray(ids)
    points = np.asarray(points, dtype=float)
    n = len(ids)
    if n == 0:
        return []
    order = np.argsort(ids, kind="stable")
    ids = ids[order]
    points = points[order]

    diff = points[:, None, :] - points[None, :, :]
    within = (diff * diff).sum(axis=2) <= params.eps * params.eps
    neighbor_lists = [np.nonzero(within[i])[0] for i in range(n)]
    core = [len(nb) >= params.min_pts for nb in neighbor_lists]

    UNSEEN = -1
    label = [UNSEEN] * n
    clusters: list[list[int]] = []
    for seed in range(n):
        if label[seed] != UNSEEN or not core[seed]:
            continue
        cluster_id = len(clusters)
        members = [seed]
        label[seed] = cluster_id
        queue = list(neighbor_lists[seed])
        qi = 0
        while qi < len(queue):
            p = queue[qi]
            qi += 1
            if label[p] != UNSEEN:
                continue
            label[p] = cluster_id
            members.append(p)
            if core[p]:
                queue.extend(neighbor_lists[p])
        clusters.append(members)

    tidsets = [Tidset.from_ids(int(ids[m]) for m in members) for members in clusters]
    tidsets.sort(key=lambda t: t.ids[0])
    return tidsets


def build_cluster_matrix(db: TrajectoryDB, params: DbscanParams, *,
                         kind: str = "per-timestamp", threads: int = 1) -> ClusterMatrix:
    """Cluster every timestamp of the database and assemble the 0-1 matrix.

    ``kind`` tags the result (use "periodic" when db is a sub-trajectory
    database from periodic decomposition).  ``threads`` clusters timestamps
    concurrently; output is identical for any thread count.
    """
    if kind not in ("per-timestamp", "periodic"):
        raise MatrixKindError(
            f"cannot build a {kind!r} matrix from trajectories")
    if not isinstance(threads, int) or threads < 1:
        raise ParameterError(f"threads must be an int >= 1, got {threads!r}")
    present = db.present

    def snapshot(t: int) -> list[Tidset]:
        idx = np.nonzero(present[:, t])[0]
        if len(idx) == 0:
            return []
        return dbscan_snapshot(idx, db.xy[idx, t], params)

    if threads > 1 and db.n_times > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            per_time = list(ex.map(snapshot, range(db.n_times)))
    else:
        per_time = [snapshot(t) for t in range(db.n_times)]

    columns = [Column(ClusterId(t, i), tid)
               for t, tids in enumerate(per_time) for i, tid in enumerate(tids)]
    return ClusterMatrix(db.object_labels, db.time_labels, tuple(columns), kind)
