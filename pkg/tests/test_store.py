import io
import json

import numpy as np
import pytest

from comove import (
    Convoy,
    ClosedSwarm,
    ExtractionContext,
    FciStore,
    MiningParams,
    ParseError,
    Tidset,
    TrajectoryDB,
    UniverseError,
    extract_patterns,
    gen_random_matrix,
    mine_fci,
    parse_trajectories,
    read_cluster_columns,
    read_fci_store,
    write_cluster_columns,
    write_fci_store,
    write_patterns_csv,
    write_patterns_geojson,
    write_trajectories,
)
from conftest import expanding_trio_matrix, make_matrix, three_column_matrix


def _round_trip(write, read, value):
    buf = io.StringIO()
    write(value, buf)
    buf.seek(0)
    return read(buf)


# ---------------------------------------------------------------------------
# Trajectory CSV
# ---------------------------------------------------------------------------

def test_trajectory_round_trip():
    rng = np.random.default_rng(9)
    xy = rng.uniform(-100, 100, size=(5, 7, 2))
    xy[rng.random((5, 7)) < 0.3] = np.nan
    xy[:, 0] = rng.uniform(size=(5, 2))  # every object observed somewhere
    xy[0, :] = rng.uniform(size=(7, 2))  # every timestamp observed somewhere
    db = TrajectoryDB(tuple(f"o{i}" for i in range(5)), tuple(range(7)), xy)
    assert _round_trip(write_trajectories, parse_trajectories, db) == db


def test_trajectory_write_format():
    db = TrajectoryDB(("a",), (3,), np.array([[[0.25, -1.5]]]))
    buf = io.StringIO()
    write_trajectories(db, buf)
    assert buf.getvalue() == "object_id,timestamp,x,y\na,3,0.25,-1.5\n"


def test_trajectory_write_to_path(tmp_path):
    db = TrajectoryDB(("a",), (0,), np.zeros((1, 1, 2)))
    p = tmp_path / "out.csv"
    write_trajectories(db, p)
    assert parse_trajectories(p) == db


# ---------------------------------------------------------------------------
# Cluster-column dump
# ---------------------------------------------------------------------------

def test_cluster_columns_round_trip_random():
    rng = np.random.default_rng(19)
    checked = 0
    while checked < 30:
        m = gen_random_matrix(rng)
        covered_objects = set()
        covered_times = set()
        for c in m.columns:
            covered_objects.update(c.members.ids)
            covered_times.add(c.cid.time)
        if covered_objects != set(range(m.n_objects)) \
                or covered_times != set(range(m.n_times)):
            continue  # the format only keeps what some column mentions
        checked += 1
        assert _round_trip(write_cluster_columns, read_cluster_columns, m) == m


def test_cluster_columns_drop_uncovered_universe():
    # objects o4,o5 are in no cluster, so reading the dump shrinks the
    # universe to the three mentioned objects
    m = three_column_matrix()
    assert m.n_objects == 5
    got = _round_trip(write_cluster_columns, read_cluster_columns, m)
    assert got == make_matrix(
        {(0, 0): [0, 1, 2], (1, 0): [0, 1], (2, 0): [0, 1, 2]}, n_objects=3)


def test_cluster_columns_format_and_comments():
    got = read_cluster_columns(io.StringIO(
        "# clusters\n\n0.5\t0\tb,a\n2\t0\tc,d\n"))
    assert got.time_labels == (0.5, 2)
    assert got.object_labels == ("a", "b", "c", "d")
    assert got.columns[0].members == Tidset.from_ids([0, 1])

    buf = io.StringIO()
    write_cluster_columns(got, buf)
    assert buf.getvalue() == "0.5\t0\ta,b\n2\t0\tc,d\n"


@pytest.mark.parametrize("text", [
    "",                        # nothing
    "# only a comment\n",
    "0\t0\n",                  # missing members field
    "x\t0\ta\n",               # bad time label
    "0\tx\ta\n",               # bad ordinal
    "0\t-1\ta\n",              # negative ordinal
    "0\t0\ta,,b\n",            # empty member
    "0\t0\ta,a\n",             # repeated member
    "0\t0\ta\n0\t0\tb\n",      # duplicate cluster id
    "0\t0\ta,b\n0\t1\tb,c\n",  # overlapping clusters at one timestamp
])
def test_cluster_columns_rejects(text):
    with pytest.raises(ParseError):
        read_cluster_columns(io.StringIO(text))


# ---------------------------------------------------------------------------
# Itemset store
# ---------------------------------------------------------------------------

def test_fci_store_round_trip_random():
    rng = np.random.default_rng(29)
    for _ in range(30):
        m = gen_random_matrix(rng)
        store = FciStore(2, m.object_labels, m.time_labels,
                         tuple(mine_fci(m, 2)))
        assert _round_trip(write_fci_store, read_fci_store, store) == store


def test_fci_store_header_and_rows():
    m = three_column_matrix()
    store = FciStore(2, m.object_labels, m.time_labels, tuple(mine_fci(m, 2)))
    buf = io.StringIO()
    write_fci_store(store, buf)
    assert buf.getvalue() == (
        "# epsilon\t2\n"
        "# n_objects\t5\n"
        "# time_range\t0\t2\n"
        "# objects\to1,o2,o3,o4,o5\n"
        "# times\t0,1,2\n"
        "2\to1,o2\t0:0;1:0;2:0\n"
        "3\to1,o2,o3\t0:0;2:0\n"
    )


def test_fci_store_float_times_and_empty():
    store = FciStore(3, ("a", "b"), (0.5, 1.75), ())
    assert _round_trip(write_fci_store, read_fci_store, store) == store
    store = FciStore(2, ("a",), (), ())
    assert _round_trip(write_fci_store, read_fci_store, store) == store


def test_fci_store_time_span():
    assert FciStore(2, ("a",), (5, 6, 7), ()).time_span == 3


_HEADER = "# epsilon\t1\n# objects\ta,b\n# times\t0,1\n"


@pytest.mark.parametrize("text", [
    "1\ta\t0:0\n",                       # no header at all
    "# objects\ta\n# times\t0\n",        # missing epsilon
    "# epsilon\t0\n# objects\ta\n# times\t0\n",
    "# epsilon\tx\n# objects\ta\n# times\t0\n",
    "# epsilon\t1\n# n_objects\t9\n# objects\ta\n# times\t0\n",
    "# epsilon\t1\n# time_range\t0\t9\n# objects\ta\n# times\t0,1\n",
    "# epsilon\t1\n# objects\ta\n# times\t1,0\n",
    _HEADER + "1\ta\n",                  # wrong field count
    _HEADER + "x\ta\t0:0\n",             # bad support
    _HEADER + "2\ta\t0:0\n",             # support does not match members
    _HEADER + "1\tz\t0:0\n",             # unknown object
    _HEADER + "1\ta\t7:0\n",             # unknown time label
    _HEADER + "1\ta\t0:x\n",             # bad ordinal
    _HEADER + "1\ta\t1:0;0:0\n",         # items out of order
])
def test_fci_store_rejects(text):
    with pytest.raises(ParseError):
        read_fci_store(io.StringIO(text))


def test_fci_store_minimal_header_ok():
    got = read_fci_store(io.StringIO(_HEADER + "1\tb\t0:0;1:2\n"))
    assert got.epsilon == 1
    assert got.object_labels == ("a", "b")
    assert got.time_labels == (0, 1)
    (fci,) = got.fcis
    assert fci.tidset == Tidset.from_ids([1])
    assert fci.items == ((0, 0), (1, 2))


# ---------------------------------------------------------------------------
# Pattern CSV
# ---------------------------------------------------------------------------

def test_patterns_csv_golden():
    m = expanding_trio_matrix()
    ctx = ExtractionContext(m, MiningParams(epsilon=2, min_t=1))
    patterns = extract_patterns(mine_fci(m, 2), ctx)
    buf = io.StringIO()
    write_patterns_csv(patterns, m, buf)
    assert buf.getvalue() == (
        "kind,objects,times,weight\n"
        "closed_swarm,o1;o2,0;1;2;3,1.0\n"
        "closed_swarm,o1;o2;o3,2;3,0.5\n"
        "convoy,o1;o2,0..3,1.0\n"
        "convoy,o1;o2;o3,2..3,0.5\n"
        "group_pattern,o1;o2,0..3,1.0\n"
        "group_pattern,o1;o2;o3,2..3,0.5\n"
        "moving_cluster,o1;o2,0..3,1.0\n"
        "moving_cluster,o1;o2;o3,2..3,0.5\n"
    )


def test_patterns_csv_order_is_canonical():
    m = expanding_trio_matrix()
    ctx = ExtractionContext(m, MiningParams(epsilon=2, min_t=1))
    patterns = extract_patterns(mine_fci(m, 2), ctx)
    a, b = io.StringIO(), io.StringIO()
    write_patterns_csv(patterns, m, a)
    write_patterns_csv(list(reversed(patterns)), m, b)
    assert a.getvalue() == b.getvalue()


# ---------------------------------------------------------------------------
# GeoJSON
# ---------------------------------------------------------------------------

def _two_object_db():
    xy = np.array([[[0.0, 0.0], [1.0, 0.0]],
                   [[0.0, 1.0], [1.0, 1.0]]])
    return TrajectoryDB(("o1", "o2"), (0, 1), xy)


def test_geojson_structure():
    db = _two_object_db()
    m = make_matrix({(0, 0): [0, 1], (1, 0): [0, 1]})
    buf = io.StringIO()
    write_patterns_geojson([Convoy(Tidset.from_ids([0, 1]), 0, 1)], m, db, buf)
    doc = json.loads(buf.getvalue())
    assert doc["type"] == "FeatureCollection"
    (feat,) = doc["features"]
    assert feat["geometry"] == {
        "type": "MultiLineString",
        "coordinates": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 1.0], [1.0, 1.0]]],
    }
    assert feat["properties"] == {
        "kind": "convoy", "objects": ["o1", "o2"], "times": "0..1", "weight": 1.0}
    assert buf.getvalue().endswith("\n")


def test_geojson_drops_single_point_tracks():
    db = _two_object_db()
    db.xy[1, 1] = np.nan  # o2 has only one observed point in the span
    m = make_matrix({(0, 0): [0, 1], (1, 0): [0, 1]})
    buf = io.StringIO()
    write_patterns_geojson([Convoy(Tidset.from_ids([0, 1]), 0, 1)], m, db, buf)
    (feat,) = json.loads(buf.getvalue())["features"]
    assert feat["geometry"]["coordinates"] == [[[0.0, 0.0], [1.0, 0.0]]]
    # a single-timestamp pattern has no drawable track at all
    buf = io.StringIO()
    write_patterns_geojson([ClosedSwarm(Tidset.from_ids([0, 1]), (0,))], m, db, buf)
    (feat,) = json.loads(buf.getvalue())["features"]
    assert feat["geometry"]["coordinates"] == []


def test_geojson_requires_matching_universe():
    db = _two_object_db()
    m = make_matrix({(0, 0): [0, 1]}, labels=("x", "y"))
    with pytest.raises(UniverseError):
        write_patterns_geojson([], m, db, io.StringIO())
