"""r-VectorSum over GF(2): do at most ``r`` vectors XOR to the target?"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from ..errors import ArgumentError, BudgetError
from .budget import SolveBudget, Stopwatch


@dataclass(frozen=True)
class VectorSumInstance:
    """Vectors are ints with coordinate ``t`` at bit ``t``.

    ``indicator_blocks`` lists coordinate ranges ``[start, stop)`` used only as
    a pruning hint by the solver; leave it empty for arbitrary instances.
    """

    dim: int
    vectors: tuple[int, ...]
    target: int
    r: int
    labels: tuple[Hashable, ...] = ()
    indicator_blocks: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(int(v) for v in self.vectors))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(
            self, "indicator_blocks", tuple((int(a), int(b)) for a, b in self.indicator_blocks)
        )
        for i, v in enumerate(self.vectors):
            if v < 0 or v >> self.dim:
                raise ArgumentError(f"vector {i} has coordinates beyond dim {self.dim}")
        if self.target < 0 or self.target >> self.dim:
            raise ArgumentError("target has coordinates beyond dim")
        if self.labels and len(self.labels) != len(self.vectors):
            raise ArgumentError("labels must be empty or one per vector")
        if self.r < 0:
            raise ArgumentError("negative r")


def xor_of(inst: VectorSumInstance, indices: Sequence[int]) -> int:
    acc = 0
    for i in indices:
        acc ^= inst.vectors[i]
    return acc


def _region_masks(inst: VectorSumInstance) -> list[tuple[int, int]]:
    """``(mask, per-vector max popcount)`` for each indicator block.

    The regions are only usable as a sum bound when every vector touches at
    most one of them; otherwise an empty list is returned.
    """
    regions = []
    for start, stop in inst.indicator_blocks:
        regions.append(((1 << stop) - (1 << start), 0))
    if not regions:
        return []
    out = [[m, 0] for m, _ in regions]
    for v in inst.vectors:
        touched = 0
        for entry in out:
            c = (v & entry[0]).bit_count()
            if c:
                touched += 1
                entry[1] = max(entry[1], c)
        if touched > 1:
            return []
    return [(m, c) for m, c in out if c]


def solve_vector_sum(
    inst: VectorSumInstance,
    budget: SolveBudget | None = None,
    r: int | None = None,
) -> tuple[bool, tuple[int, ...]]:
    """Exhaustive search for ``I`` with ``|I| <= r`` and ``XOR(I) == target``.

    Depth limits are tried in increasing order, so the returned index set has
    minimum cardinality.  At each node a vector is *viable* if picking it
    leaves a residual that can still be cleared with the picks remaining
    (see ``lower_bound``).  The node branches on the residual coordinate
    carried by the fewest viable vectors; some chosen vector must flip it.
    A vector explored and abandoned at a node is excluded from its later
    siblings, which keeps the search exhaustive without revisiting sets.
    """
    budget = budget or SolveBudget()
    r = inst.r if r is None else r
    if r > budget.max_vector_picks:
        raise BudgetError(f"r={r} exceeds vector-sum cap {budget.max_vector_picks}")
    if inst.target == 0:
        return True, ()

    vectors = inst.vectors
    maxpop = max((v.bit_count() for v in vectors), default=0)
    regions = _region_masks(inst)
    watch = Stopwatch(budget)

    def lower_bound(residual: int) -> int:
        if not residual:
            return 0
        need = 1
        if maxpop:
            need = max(need, -(-residual.bit_count() // maxpop))
        if regions:
            ind = 0
            for m, c in regions:
                ind += -(-(residual & m).bit_count() // c)
            need = max(need, ind)
        return need

    def search(residual: int, picks_left: int, chosen: list[int], banned: set[int]):
        watch.tick()
        if not residual:
            return tuple(sorted(chosen))
        if lower_bound(residual) > picks_left:
            return None
        viable = [
            idx
            for idx, v in enumerate(vectors)
            if idx not in banned and lower_bound(residual ^ v) < picks_left
        ]
        counts: dict[int, int] = {}
        for idx in viable:
            b = vectors[idx] & residual
            while b:
                low = b & -b
                counts[low] = counts.get(low, 0) + 1
                b ^= low
        if len(counts) < residual.bit_count():
            return None
        pivot = min(counts, key=lambda bit: (counts[bit], bit))
        tried: list[int] = []
        found = None
        for idx in viable:
            if not vectors[idx] & pivot:
                continue
            chosen.append(idx)
            banned.add(idx)
            found = search(residual ^ vectors[idx], picks_left - 1, chosen, banned)
            chosen.pop()
            tried.append(idx)
            if found is not None:
                break
        for t in tried:
            banned.discard(t)
        return found

    for depth in range(1, r + 1):
        if lower_bound(inst.target) > depth:
            continue
        found = search(inst.target, depth, [], set())
        if found is not None:
            return True, found
    return False, ()
