"""Core data model for co-movement pattern mining.

Everything downstream (clustering, mining, pattern decoding) speaks in terms of
the types defined here:

* objects and timestamps are dense integer indices into label tables,
* a :class:`Tidset` is an immutable set of object indices backed by a bitmask,
* a :class:`ClusterMatrix` is the 0-1 object/cluster membership matrix with
  columns grouped by time unit,
* an :class:`FCI` is a frequent closed itemset over matrix columns,
* pattern dataclasses carry the decoded co-movement patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

__all__ = [
    "CoMoveError",
    "ParseError",
    "ConflictError",
    "ParameterError",
    "MatrixKindError",
    "UniverseError",
    "TimeRangeError",
    "NotNestedError",
    "SizeGuardError",
    "Tidset",
    "tidset_intersect",
    "ClusterId",
    "Column",
    "MATRIX_KINDS",
    "ClusterMatrix",
    "FCI",
    "MiningParams",
    "ClosedSwarm",
    "Convoy",
    "MovingCluster",
    "GroupPattern",
    "PeriodicPattern",
    "Pattern",
    "canonical_sort",
]


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class CoMoveError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CoMoveError, ValueError):
    """Malformed input data; carries the offending line number when known."""

    def __init__(self, message: str, *, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConflictError(ParseError):
    """Two observations for the same object at the same timestamp."""


class ParameterError(CoMoveError, ValueError):
    """A mining or clustering parameter is out of its valid range."""


class MatrixKindError(CoMoveError, TypeError):
    """An operation was applied to a cluster matrix of the wrong kind."""


class UniverseError(CoMoveError, ValueError):
    """Two inputs that must share an object universe do not."""


class TimeRangeError(CoMoveError, ValueError):
    """Incoming timestamps do not lie strictly after the existing ones."""


class NotNestedError(CoMoveError, ValueError):
    """A block handed to the nested miner is not actually nested."""


class SizeGuardError(CoMoveError, ValueError):
    """A brute-force oracle was asked to enumerate something too large."""


# ---------------------------------------------------------------------------
# Tidsets
# ---------------------------------------------------------------------------

class Tidset:
    """An immutable set of object indices, stored as an int bitmask.

    Bit ``i`` set means object index ``i`` is a member.  The sorted index
    tuple is materialised lazily on first access and cached, so both the
    bit-parallel view (fast intersection/subset tests) and the list view
    (iteration, output) are cheap where they matter.
    """

    __slots__ = ("mask", "_ids")

    def __init__(self, mask: int):
        if mask < 0:
            raise ValueError("tidset mask must be non-negative")
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "_ids", None)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Tidset is immutable")

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> "Tidset":
        mask = 0
        for i in ids:
            if i < 0:
                raise ValueError(f"object index must be non-negative, got {i}")
            mask |= 1 << i
        return cls(mask)

    @property
    def ids(self) -> tuple[int, ...]:
        cached = self._ids
        if cached is None:
            m = self.mask
            out = []
            i = 0
            while m:
                low = m & -m
                out.append(low.bit_length() - 1)
                m ^= low
                i += 1
            cached = tuple(out)
            object.__setattr__(self, "_ids", cached)
        return cached

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, i: int) -> bool:
        return i >= 0 and (self.mask >> i) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids)

    def __and__(self, other: "Tidset") -> "Tidset":
        return Tidset(self.mask & other.mask)

    def __or__(self, other: "Tidset") -> "Tidset":
        return Tidset(self.mask | other.mask)

    def issubset(self, other: "Tidset") -> bool:
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "Tidset") -> bool:
        return other.mask & ~self.mask == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Tidset) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        inner = ",".join(map(str, self.ids))
        return f"Tidset({{{inner}}})"


def tidset_intersect(a: Tidset, b: Tidset) -> Tidset:
    """Intersection of two tidsets (bitwise AND of the masks)."""
    return Tidset(a.mask & b.mask)


# ---------------------------------------------------------------------------
# Cluster matrix
# ---------------------------------------------------------------------------

class ClusterId(NamedTuple):
    """Identity of a matrix column: (time unit index, ordinal within unit).

    For per-timestamp and periodic matrices the time unit is a timestamp
    (resp. period offset) index; for closed-itemset matrices it is a block
    index.
    """

    time: int
    ordinal: int


class Column(NamedTuple):
    """A matrix column: its identity plus the objects it contains."""

    cid: ClusterId
    members: Tidset


#: Valid values for :attr:`ClusterMatrix.kind`.  ``per-timestamp`` and
#: ``periodic`` matrices keep same-unit columns disjoint; ``closed-itemset``
#: matrices (whose units are block indices) may overlap within a unit.
MATRIX_KINDS = ("per-timestamp", "periodic", "closed-itemset")


@dataclass(frozen=True)
class ClusterMatrix:
    """0-1 membership matrix: rows are objects, columns are clusters.

    ``object_labels`` and ``time_labels`` translate dense indices back to the
    caller's vocabulary (object ids and timestamps / period offsets / block
    ids).  ``columns`` hold the actual matrix content as tidsets; a cell
    (object, column) is 1 iff the object index is in the column's tidset.
    """

    object_labels: tuple[str, ...]
    time_labels: tuple  # ints or floats, strictly increasing
    columns: tuple[Column, ...]
    kind: str = "per-timestamp"

    def __post_init__(self):
        if self.kind not in MATRIX_KINDS:
            raise MatrixKindError(
                f"unknown matrix kind {self.kind!r}; expected one of {MATRIX_KINDS}")
        n = len(self.object_labels)
        t = len(self.time_labels)
        if len(set(self.object_labels)) != n:
            raise ParseError("duplicate object labels")
        if any(self.time_labels[i] >= self.time_labels[i + 1] for i in range(t - 1)):
            raise ParseError("time labels must be strictly increasing")
        seen_ids = set()
        per_time_or: dict[int, int] = {}
        per_time_popcount: dict[int, int] = {}
        for cid, members in self.columns:
            if not 0 <= cid.time < t:
                raise ParseError(f"column {cid} has out-of-range time index")
            if cid in seen_ids:
                raise ParseError(f"duplicate column id {cid}")
            seen_ids.add(cid)
            if not members:
                raise ParseError(f"column {cid} is empty")
            if members.mask >> n:
                raise UniverseError(
                    f"column {cid} contains object indices >= {n}")
            per_time_or[cid.time] = per_time_or.get(cid.time, 0) | members.mask
            per_time_popcount[cid.time] = per_time_popcount.get(cid.time, 0) + len(members)
        if self.kind != "closed-itemset":
            for tt, acc in per_time_or.items():
                if acc.bit_count() != per_time_popcount[tt]:
                    raise ParseError(
                        f"columns at time unit {tt} overlap; {self.kind} matrices "
                        "require disjoint same-unit columns")

    @classmethod
    def build(cls, object_labels: Sequence[str], time_labels: Sequence,
              columns: Iterable[Column], kind: str = "per-timestamp",
              sort: bool = True) -> "ClusterMatrix":
        cols = tuple(sorted(columns, key=lambda c: c.cid) if sort else columns)
        return cls(tuple(object_labels), tuple(time_labels), cols, kind)

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def n_times(self) -> int:
        return len(self.time_labels)

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    def columns_at(self, time: int) -> list[Column]:
        return [c for c in self.columns if c.cid.time == time]

    def tidset_of(self, cid: ClusterId) -> Tidset:
        for c in self.columns:
            if c.cid == cid:
                return c.members
        raise KeyError(cid)

    def column_map(self) -> dict[ClusterId, Tidset]:
        return {c.cid: c.members for c in self.columns}


# ---------------------------------------------------------------------------
# Frequent closed itemsets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FCI:
    """A frequent closed itemset: matrix columns plus their shared objects.

    ``items`` are sorted by (time, ordinal); ``tidset`` is the set of objects
    belonging to every item, and the support is its cardinality.
    """

    items: tuple[ClusterId, ...]
    tidset: Tidset

    def __post_init__(self):
        if not self.items:
            raise ValueError("an FCI needs at least one item")
        if any(self.items[i] >= self.items[i + 1] for i in range(len(self.items) - 1)):
            raise ValueError("FCI items must be strictly ascending")

    @property
    def support(self) -> int:
        return len(self.tidset)

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(i.time for i in self.items)

    def __len__(self) -> int:
        return len(self.items)


# ---------------------------------------------------------------------------
# Mining parameters
# ---------------------------------------------------------------------------

#: Accepted values for MiningParams.mode.
MINING_MODES = ("monolithic", "incremental", "nested")


@dataclass(frozen=True)
class MiningParams:
    """Support/shape thresholds shared across the mining pipeline.

    epsilon    minimum number of co-moving objects (itemset support)
    min_t      minimum number of involved time units
    theta      Jaccard threshold for moving-cluster chains
    min_c      minimum number of consecutive segments in a group pattern
    min_wei    minimum fraction of the time span covered by a group pattern
    block_size timestamps per block for incremental mining (None = default 25)
    mode       monolithic | incremental | nested
    """

    epsilon: int = 2
    min_t: int = 1
    theta: float = 0.5
    min_c: int = 1
    min_wei: float = 0.0
    block_size: int | None = None
    mode: str = "monolithic"

    def __post_init__(self):
        if not isinstance(self.epsilon, int) or self.epsilon < 1:
            raise ParameterError(f"epsilon must be an int >= 1, got {self.epsilon!r}")
        if not isinstance(self.min_t, int) or self.min_t < 1:
            raise ParameterError(f"min_t must be an int >= 1, got {self.min_t!r}")
        if not 0.0 <= self.theta <= 1.0:
            raise ParameterError(f"theta must be in [0, 1], got {self.theta!r}")
        if not isinstance(self.min_c, int) or self.min_c < 1:
            raise ParameterError(f"min_c must be an int >= 1, got {self.min_c!r}")
        if not 0.0 <= self.min_wei <= 1.0:
            raise ParameterError(f"min_wei must be in [0, 1], got {self.min_wei!r}")
        if self.block_size is not None and (
                not isinstance(self.block_size, int) or self.block_size < 1):
            raise ParameterError(
                f"block_size must be an int >= 1 or None, got {self.block_size!r}")
        if self.mode not in MINING_MODES:
            raise ParameterError(
                f"mode must be one of {MINING_MODES}, got {self.mode!r}")


# ---------------------------------------------------------------------------
# Patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedSwarm:
    """Objects that share a cluster at each listed (not necessarily
    consecutive) timestamp, maximal in both objects and timestamps."""

    kind = "closed_swarm"
    objects: Tidset
    times: tuple[int, ...]


@dataclass(frozen=True)
class Convoy:
    """Objects that stay clustered together over a maximal consecutive
    time interval [start, end]."""

    kind = "convoy"
    objects: Tidset
    start: int
    end: int

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(range(self.start, self.end + 1))


@dataclass(frozen=True)
class MovingCluster:
    """A chain of clusters at consecutive timestamps whose adjacent pairs
    overlap by at least theta (Jaccard); ``objects`` is the chain's core,
    the objects present in every cluster of the chain."""

    kind = "moving_cluster"
    clusters: tuple[ClusterId, ...]
    objects: Tidset

    @property
    def start(self) -> int:
        return self.clusters[0].time

    @property
    def end(self) -> int:
        return self.clusters[-1].time


@dataclass(frozen=True)
class GroupPattern:
    """Objects that travel together over several consecutive segments;
    weight is total covered time over the whole time span."""

    kind = "group_pattern"
    objects: Tidset
    segments: tuple[tuple[int, int], ...]
    weight: float

    @property
    def times(self) -> tuple[int, ...]:
        out: list[int] = []
        for a, b in self.segments:
            out.extend(range(a, b + 1))
        return tuple(out)


@dataclass(frozen=True)
class PeriodicPattern:
    """Sub-trajectories that share a cluster at each listed period offset."""

    kind = "periodic_pattern"
    objects: Tidset  # sub-trajectory indices
    times: tuple[int, ...]  # period offsets


Pattern = Union[ClosedSwarm, Convoy, MovingCluster, GroupPattern, PeriodicPattern]


def _pattern_key(p: Pattern):
    if isinstance(p, ClosedSwarm):
        return (p.kind, p.objects.ids, p.times, ())
    if isinstance(p, Convoy):
        return (p.kind, p.objects.ids, (p.start, p.end), ())
    if isinstance(p, MovingCluster):
        return (p.kind, p.objects.ids, tuple(p.clusters), ())
    if isinstance(p, GroupPattern):
        return (p.kind, p.objects.ids, p.segments, (p.weight,))
    if isinstance(p, PeriodicPattern):
        return (p.kind, p.objects.ids, p.times, ())
    raise TypeError(f"not a pattern: {p!r}")


def canonical_sort(patterns: Iterable[Pattern]) -> list[Pattern]:
    """Deterministic total order over mixed pattern kinds: by kind name, then
    object ids, then times/segments/chain.  Used everywhere output order
    matters, so equal inputs produce byte-identical files."""
    return sorted(patterns, key=_pattern_key)
