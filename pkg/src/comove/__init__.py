"""Co-movement pattern mining over trajectory data.

Pipeline: trajectories -> per-timestamp density clustering -> 0-1 cluster
matrix -> frequent closed itemsets -> closed swarms, convoys, moving
clusters, group patterns and periodic patterns.  Itemsets can be mined in
one pass, block-incrementally, or parameter-free over nested blocks, and
stored results can absorb newly appended timestamps without re-mining.
"""

from .clustering import DbscanParams, build_cluster_matrix, dbscan_snapshot
from .combine import combine_fcis, shift_times, should_update
from .incremental import (
    Block,
    ClosedItemsetMatrix,
    build_cim,
    mine_incremental,
    mine_parameter_free,
    nested_block_partition,
    nested_reorder,
    split_blocks,
)
from .ingest import (
    PeriodicDecomposition,
    TrajectoryDB,
    interpolate,
    parse_trajectories,
    periodic_decompose,
)
from .miner import (
    intersection_closed_tidsets,
    mine_fci,
    mine_fci_nested,
    reclose_tidsets,
)
from .model import (
    FCI,
    ClosedSwarm,
    CoMoveError,
    ClusterId,
    ClusterMatrix,
    Column,
    ConflictError,
    Convoy,
    GroupPattern,
    MatrixKindError,
    MiningParams,
    MovingCluster,
    NotNestedError,
    ParameterError,
    ParseError,
    Pattern,
    PeriodicPattern,
    SizeGuardError,
    Tidset,
    TimeRangeError,
    UniverseError,
    canonical_sort,
    tidset_intersect,
)
from .oracle import (
    brute_closed_swarms,
    brute_convoys,
    brute_fcis,
    brute_group_patterns,
    gen_random_matrix,
    gen_random_nested_matrix,
)
from .patterns import (
    ExtractionContext,
    closed_swarm_of,
    convoys_of,
    extract_patterns,
    group_pattern_of,
    moving_clusters_of,
    periodic_pattern_of,
)
from .store import (
    FciStore,
    read_cluster_columns,
    read_fci_store,
    write_cluster_columns,
    write_fci_store,
    write_patterns_csv,
    write_patterns_geojson,
    write_trajectories,
)
from .synthetic import SyntheticSpec, gen_synthetic

__version__ = "0.1.0"
