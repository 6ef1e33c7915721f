"""Block-incremental and parameter-free mining.

Instead of mining a big matrix in one pass, the engine splits it into column
blocks, mines each block's closed itemsets locally, and assembles the global
answer from the local ones.  The bridge between the two levels is the
closed-itemset matrix: one column per local itemset, holding its tidset and
remembering its expansion into original columns.

The global pass works in tidset space: every global closed itemset's tidset
is an intersection of local-itemset tidsets (its restriction to a block is a
local closed itemset), so closing the local tidsets under pairwise
intersection and re-closing each result against the original matrix
reproduces the monolithic answer exactly, including itemset contents.

The parameter-free variant skips choosing a block size: columns are reordered
so that containment chains sit next to each other, chains become nested
blocks (mined by a linear scan), and whatever is left goes into one sparse
block.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .model import (
    FCI,
    ClusterId,
    ClusterMatrix,
    Column,
    ParameterError,
    Tidset,
)
from .miner import (
    intersection_closed_tidsets,
    mine_fci,
    mine_fci_nested,
    reclose_tidsets,
)

__all__ = [
    "DEFAULT_BLOCK_SIZE",
    "Block",
    "ClosedItemsetMatrix",
    "split_blocks",
    "build_cim",
    "mine_incremental",
    "nested_reorder",
    "nested_block_partition",
    "mine_parameter_free",
]

DEFAULT_BLOCK_SIZE = 25


@dataclass(frozen=True)
class Block:
    """A slice of a cluster matrix: some of its columns, kept in a fixed
    order.  ``nested`` marks blocks whose column order is a containment
    chain, unlocking the linear-scan miner."""

    index: int
    columns: tuple[Column, ...]
    nested: bool = False

    def as_matrix(self, parent: ClusterMatrix) -> ClusterMatrix:
        return ClusterMatrix(parent.object_labels, parent.time_labels,
                             self.columns, parent.kind)


@dataclass(frozen=True)
class ClosedItemsetMatrix:
    """Matrix over blocks: column (b, i) is block b's i-th local closed
    itemset, with the itemset's tidset as members and its original columns
    recorded in ``expansions`` (parallel to ``matrix.columns``)."""

    matrix: ClusterMatrix
    expansions: tuple[tuple[ClusterId, ...], ...]

    def __post_init__(self):
        if self.matrix.kind != "closed-itemset":
            raise ParameterError("a ClosedItemsetMatrix wraps a closed-itemset matrix")
        if len(self.expansions) != len(self.matrix.columns):
            raise ParameterError("one expansion per column required")


def split_blocks(matrix: ClusterMatrix, block_size: int) -> list[Block]:
    """Cut the time axis into consecutive windows of block_size timestamps;
    each window's columns form one block (possibly empty)."""
    if not isinstance(block_size, int) or block_size < 1:
        raise ParameterError(f"block_size must be an int >= 1, got {block_size!r}")
    n_blocks = max(1, -(-matrix.n_times // block_size))
    buckets: list[list[Column]] = [[] for _ in range(n_blocks)]
    for col in matrix.columns:
        buckets[col.cid.time // block_size].append(col)
    return [Block(i, tuple(cols)) for i, cols in enumerate(buckets)]


def build_cim(parent: ClusterMatrix, local_fcis: list[list[FCI]]) -> ClosedItemsetMatrix:
    """Assemble the closed-itemset matrix from per-block local results."""
    columns = []
    expansions = []
    for b, fcis in enumerate(local_fcis):
        for i, fci in enumerate(fcis):
            columns.append(Column(ClusterId(b, i), fci.tidset))
            expansions.append(fci.items)
    cim = ClusterMatrix(parent.object_labels, tuple(range(len(local_fcis))),
                        tuple(columns), "closed-itemset")
    return ClosedItemsetMatrix(cim, tuple(expansions))


def _mine_blocks(parent: ClusterMatrix, blocks: list[Block], epsilon: int,
                 threads: int) -> list[list[FCI]]:
    def job(block: Block) -> list[FCI]:
        sub = block.as_matrix(parent)
        if block.nested:
            return mine_fci_nested(sub, epsilon)
        return mine_fci(sub, epsilon)

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(job, blocks))
    return [job(b) for b in blocks]


def _finish(parent: ClusterMatrix, cim: ClosedItemsetMatrix, epsilon: int) -> list[FCI]:
    seeds = [c.members.mask for c in cim.matrix.columns]
    family = intersection_closed_tidsets(seeds, epsilon)
    return reclose_tidsets(parent, family, epsilon)


def mine_incremental(matrix: ClusterMatrix, epsilon: int,
                     block_size: int | None = None, *, threads: int = 1) -> list[FCI]:
    """Mine the matrix block by block; the result equals mine_fci(matrix,
    epsilon) for every block size."""
    bs = DEFAULT_BLOCK_SIZE if block_size is None else block_size
    blocks = split_blocks(matrix, bs)
    local = _mine_blocks(matrix, blocks, epsilon, threads)
    cim = build_cim(matrix, local)
    return _finish(matrix, cim, epsilon)


# ---------------------------------------------------------------------------
# Parameter-free: containment-ordered columns, nested blocks, one sparse block
# ---------------------------------------------------------------------------

def _is_nested(left: Column, right: Column) -> bool:
    return right.members.mask & ~left.members.mask == 0


def nested_reorder(matrix: ClusterMatrix) -> tuple[ClusterMatrix, tuple[int, ...]]:
    """Reorder columns to put containment chains next to each other.

    Primary order: tidset size descending, ties broken on tidset content so
    equal columns group together.  A single left-to-right pass then swaps
    adjacent columns whenever the swap creates a nested adjacency without
    destroying one.  Returns the reordered matrix plus the permutation
    (original column index per new position).
    """
    order = sorted(range(len(matrix.columns)),
                   key=lambda j: (-len(matrix.columns[j].members),
                                  matrix.columns[j].members.ids))
    cols = [matrix.columns[j] for j in order]

    def adjacent_flags(i: int) -> list[bool]:
        """Nestedness of the three adjacencies a swap at (i, i+1) can touch."""
        return [
            0 <= a and a + 1 < len(cols) and _is_nested(cols[a], cols[a + 1])
            for a in (i - 1, i, i + 1)
        ]

    for i in range(len(cols) - 1):
        before = adjacent_flags(i)
        cols[i], cols[i + 1] = cols[i + 1], cols[i]
        order[i], order[i + 1] = order[i + 1], order[i]
        after = adjacent_flags(i)
        gained = sum(after) > sum(before)
        lost = any(b and not a for b, a in zip(before, after))
        if not (gained and not lost):
            cols[i], cols[i + 1] = cols[i + 1], cols[i]
            order[i], order[i + 1] = order[i + 1], order[i]

    reordered = ClusterMatrix(matrix.object_labels, matrix.time_labels,
                              tuple(cols), matrix.kind)
    return reordered, tuple(order)


def nested_block_partition(matrix: ClusterMatrix) -> list[Block]:
    """Split a (reordered) matrix into maximal nested runs of at least two
    columns plus one sparse block holding everything else.  The sparse block
    always comes last, even when empty."""
    cols = matrix.columns
    blocks: list[Block] = []
    spare: list[Column] = []
    i = 0
    while i < len(cols):
        j = i
        while j + 1 < len(cols) and _is_nested(cols[j], cols[j + 1]):
            j += 1
        if j > i:
            blocks.append(Block(len(blocks), tuple(cols[i:j + 1]), nested=True))
        else:
            spare.append(cols[i])
        i = j + 1
    blocks.append(Block(len(blocks), tuple(spare)))
    return blocks


def mine_parameter_free(matrix: ClusterMatrix, epsilon: int, *,
                        threads: int = 1) -> list[FCI]:
    """Incremental mining without a block-size parameter: blocks come from
    the data's own containment structure.  Result equals mine_fci."""
    reordered, _ = nested_reorder(matrix)
    blocks = nested_block_partition(reordered)
    local = _mine_blocks(matrix, blocks, epsilon, threads)
    cim = build_cim(matrix, local)
    return _finish(matrix, cim, epsilon)
