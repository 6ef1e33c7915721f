"""On-disk formats: trajectory CSV, pre-clustered columns, itemset stores,
pattern CSV and GeoJSON.

All writers emit canonically ordered rows with ``\\n`` line endings so that
identical inputs give byte-identical files regardless of platform or thread
count.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .ingest import TrajectoryDB
from .model import (
    FCI,
    ClosedSwarm,
    ClusterId,
    ClusterMatrix,
    Column,
    Convoy,
    GroupPattern,
    MovingCluster,
    ParseError,
    Pattern,
    PeriodicPattern,
    Tidset,
    UniverseError,
    canonical_sort,
)

__all__ = [
    "write_trajectories",
    "read_cluster_columns",
    "write_cluster_columns",
    "FciStore",
    "read_fci_store",
    "write_fci_store",
    "write_patterns_csv",
    "write_patterns_geojson",
]


def _fmt_time(label) -> str:
    return repr(label) if isinstance(label, float) else str(label)


def _parse_time_label(s: str):
    try:
        return int(s)
    except ValueError:
        try:
            return float(s)
        except ValueError:
            raise ParseError(f"unparseable time label {s!r}") from None


# ---------------------------------------------------------------------------
# Trajectory CSV
# ---------------------------------------------------------------------------

def write_trajectories(db: TrajectoryDB, dest):
    """object_id,timestamp,x,y rows, object-major, observed cells only."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            return write_trajectories(db, fh)
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(["object_id", "timestamp", "x", "y"])
    present = db.present
    for o, label in enumerate(db.object_labels):
        for t, tlabel in enumerate(db.time_labels):
            if present[o, t]:
                x, y = db.xy[o, t]
                w.writerow([label, _fmt_time(tlabel), repr(float(x)), repr(float(y))])


# ---------------------------------------------------------------------------
# Pre-clustered columns (timestamp <TAB> ordinal <TAB> comma-joined members)
# ---------------------------------------------------------------------------

def read_cluster_columns(source) -> ClusterMatrix:
    """Parse a cluster-column dump into a per-timestamp matrix.

    The object universe is the union of all member ids (sorted); timestamps
    are the union of all first fields (sorted).  Blank lines and lines
    starting with '#' are skipped.
    """
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            return read_cluster_columns(fh)
    raw: list[tuple[int, object, int, tuple[str, ...]]] = []
    for line_no, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}",
                             line=line_no)
        tlabel = _parse_time_label(parts[0].strip())
        try:
            ordinal = int(parts[1])
        except ValueError:
            raise ParseError(f"unparseable ordinal {parts[1]!r}", line=line_no) from None
        if ordinal < 0:
            raise ParseError(f"ordinal must be >= 0, got {ordinal}", line=line_no)
        members = tuple(m.strip() for m in parts[2].split(","))
        if not members or any(not m for m in members):
            raise ParseError("empty member id", line=line_no)
        if len(set(members)) != len(members):
            raise ParseError("repeated member id in one cluster", line=line_no)
        raw.append((line_no, tlabel, ordinal, members))
    if not raw:
        raise ParseError("no clusters found")

    times = tuple(sorted({r[1] for r in raw}))
    labels = tuple(sorted({m for r in raw for m in r[3]}))
    t_idx = {t: i for i, t in enumerate(times)}
    o_idx = {o: i for i, o in enumerate(labels)}
    seen: dict[ClusterId, int] = {}
    columns = []
    for line_no, tlabel, ordinal, members in raw:
        cid = ClusterId(t_idx[tlabel], ordinal)
        if cid in seen:
            raise ParseError(
                f"duplicate cluster {_fmt_time(tlabel)}:{ordinal} "
                f"(first seen on line {seen[cid]})", line=line_no)
        seen[cid] = line_no
        columns.append(Column(cid, Tidset.from_ids(o_idx[m] for m in members)))
    columns.sort(key=lambda c: c.cid)
    try:
        return ClusterMatrix(labels, times, tuple(columns), "per-timestamp")
    except ParseError as e:
        raise ParseError(f"invalid cluster columns: {e}") from None


def write_cluster_columns(matrix: ClusterMatrix, dest):
    if isinstance(dest, (str, Path)):
        with open(dest, "w") as fh:
            return write_cluster_columns(matrix, fh)
    for cid, members in sorted(matrix.columns, key=lambda c: c.cid):
        ids = ",".join(matrix.object_labels[i] for i in members.ids)
        dest.write(f"{_fmt_time(matrix.time_labels[cid.time])}\t{cid.ordinal}\t{ids}\n")


# ---------------------------------------------------------------------------
# Itemset store (TSV with a commented header)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FciStore:
    """A persisted mining result: the itemsets plus everything needed to
    interpret and extend them later."""

    epsilon: int
    object_labels: tuple[str, ...]
    time_labels: tuple
    fcis: tuple[FCI, ...]

    @property
    def time_span(self) -> int:
        return len(self.time_labels)


def write_fci_store(store: FciStore, dest):
    """Header lines carry epsilon, the universe size, the covered time range
    and the full label tables; one row per itemset:
    support <TAB> member ids <TAB> time:ordinal items."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w") as fh:
            return write_fci_store(store, fh)
    dest.write(f"# epsilon\t{store.epsilon}\n")
    dest.write(f"# n_objects\t{len(store.object_labels)}\n")
    if store.time_labels:
        dest.write(f"# time_range\t{_fmt_time(store.time_labels[0])}"
                   f"\t{_fmt_time(store.time_labels[-1])}\n")
    dest.write(f"# objects\t{','.join(store.object_labels)}\n")
    dest.write(f"# times\t{','.join(_fmt_time(t) for t in store.time_labels)}\n")
    for fci in sorted(store.fcis, key=lambda f: f.items):
        ids = ",".join(store.object_labels[i] for i in fci.tidset.ids)
        items = ";".join(
            f"{_fmt_time(store.time_labels[c.time])}:{c.ordinal}" for c in fci.items)
        dest.write(f"{fci.support}\t{ids}\t{items}\n")


def read_fci_store(source) -> FciStore:
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            return read_fci_store(fh)
    header: dict[str, list[str]] = {}
    body: list[tuple[int, list[str]]] = []
    for line_no, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split("\t")
            if parts and parts[0] in ("epsilon", "n_objects", "time_range",
                                      "objects", "times"):
                header[parts[0]] = parts[1:]
            continue
        body.append((line_no, line.split("\t")))

    for key in ("epsilon", "objects", "times"):
        if key not in header:
            raise ParseError(f"store header is missing '{key}'")
    try:
        epsilon = int(header["epsilon"][0])
    except (IndexError, ValueError):
        raise ParseError("store header has an unparseable epsilon") from None
    if epsilon < 1:
        raise ParseError(f"store epsilon must be >= 1, got {epsilon}")
    labels = tuple(o for o in header["objects"][0].split(",") if o) \
        if header["objects"] and header["objects"][0] else ()
    times = tuple(_parse_time_label(t) for t in header["times"][0].split(",") if t) \
        if header["times"] and header["times"][0] else ()
    if "n_objects" in header:
        try:
            declared = int(header["n_objects"][0])
        except (IndexError, ValueError):
            raise ParseError("store header has an unparseable n_objects") from None
        if declared != len(labels):
            raise ParseError(
                f"store header declares {declared} objects but lists {len(labels)}")
    if "time_range" in header and times:
        if (header["time_range"][0] != _fmt_time(times[0])
                or header["time_range"][1] != _fmt_time(times[-1])):
            raise ParseError("store time_range disagrees with the times list")
    if any(times[i] >= times[i + 1] for i in range(len(times) - 1)):
        raise ParseError("store times must be strictly increasing")

    o_idx = {o: i for i, o in enumerate(labels)}
    t_idx = {_fmt_time(t): i for i, t in enumerate(times)}
    fcis = []
    for line_no, parts in body:
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, got {len(parts)}",
                             line=line_no)
        try:
            support = int(parts[0])
        except ValueError:
            raise ParseError(f"unparseable support {parts[0]!r}", line=line_no) from None
        members = parts[1].split(",")
        unknown = [m for m in members if m not in o_idx]
        if unknown:
            raise ParseError(f"unknown object id {unknown[0]!r}", line=line_no)
        tid = Tidset.from_ids(o_idx[m] for m in members)
        if len(tid) != support or len(members) != support:
            raise ParseError(
                f"support {support} does not match {len(members)} member ids",
                line=line_no)
        items = []
        for item in parts[2].split(";"):
            t_str, _, ord_str = item.partition(":")
            if t_str not in t_idx:
                raise ParseError(f"unknown time label {t_str!r}", line=line_no)
            try:
                ordinal = int(ord_str)
            except ValueError:
                raise ParseError(f"unparseable item {item!r}", line=line_no) from None
            items.append(ClusterId(t_idx[t_str], ordinal))
        try:
            fcis.append(FCI(tuple(items), tid))
        except ValueError as e:
            raise ParseError(str(e), line=line_no) from None
    return FciStore(epsilon, labels, times, tuple(fcis))


# ---------------------------------------------------------------------------
# Pattern output
# ---------------------------------------------------------------------------

def _span(matrix: ClusterMatrix, a: int, b: int) -> str:
    la, lb = matrix.time_labels[a], matrix.time_labels[b]
    return _fmt_time(la) if a == b else f"{_fmt_time(la)}..{_fmt_time(lb)}"


def _pattern_row(p: Pattern, matrix: ClusterMatrix) -> tuple[str, str, str, float]:
    objects = ";".join(matrix.object_labels[i] for i in p.objects.ids)
    n_times = matrix.n_times
    if isinstance(p, (ClosedSwarm, PeriodicPattern)):
        times = ";".join(_fmt_time(matrix.time_labels[t]) for t in p.times)
        weight = len(p.times) / n_times
    elif isinstance(p, Convoy):
        times = _span(matrix, p.start, p.end)
        weight = (p.end - p.start + 1) / n_times
    elif isinstance(p, MovingCluster):
        times = _span(matrix, p.start, p.end)
        weight = len(p.clusters) / n_times
    elif isinstance(p, GroupPattern):
        times = ";".join(_span(matrix, a, b) for a, b in p.segments)
        weight = p.weight
    else:
        raise TypeError(f"not a pattern: {p!r}")
    return p.kind, objects, times, weight


def write_patterns_csv(patterns, matrix: ClusterMatrix, dest):
    """kind,objects,times,weight rows in canonical order.  Times are labels;
    consecutive stretches are written as first..last."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            return write_patterns_csv(patterns, matrix, fh)
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(["kind", "objects", "times", "weight"])
    for p in canonical_sort(patterns):
        kind, objects, times, weight = _pattern_row(p, matrix)
        w.writerow([kind, objects, times, repr(weight)])


def _member_track(db: TrajectoryDB, obj: int, time_indices) -> list[list[float]]:
    track = []
    for t in time_indices:
        if db.present[obj, t]:
            x, y = db.xy[obj, t]
            track.append([float(x), float(y)])
    return track


def write_patterns_geojson(patterns, matrix: ClusterMatrix, db: TrajectoryDB, dest):
    """FeatureCollection with one feature per pattern: MultiLineString of the
    members' tracks over the pattern's time span, properties mirroring the
    CSV columns.  ``db`` must be the database the matrix was built from."""
    if db.object_labels != matrix.object_labels or db.time_labels != matrix.time_labels:
        raise UniverseError(
            "trajectory database does not match the matrix (objects/times differ)")
    if isinstance(dest, (str, Path)):
        with open(dest, "w") as fh:
            return write_patterns_geojson(patterns, matrix, db, fh)
    features = []
    for p in canonical_sort(patterns):
        kind, objects, times, weight = _pattern_row(p, matrix)
        if isinstance(p, GroupPattern):
            time_indices = [t for a, b in p.segments for t in range(a, b + 1)]
        elif isinstance(p, (Convoy, MovingCluster)):
            time_indices = list(range(p.start, p.end + 1))
        else:
            time_indices = list(p.times)
        lines = []
        for obj in p.objects.ids:
            track = _member_track(db, obj, time_indices)
            if len(track) >= 2:
                lines.append(track)
        features.append({
            "type": "Feature",
            "geometry": {"type": "MultiLineString", "coordinates": lines},
            "properties": {
                "kind": kind,
                "objects": objects.split(";"),
                "times": times,
                "weight": weight,
            },
        })
    json.dump({"type": "FeatureCollection", "features": features}, dest, indent=2)
    dest.write("\n")
