"""Exact cover: breadth-first search over union masks, and a branching search."""

from __future__ import annotations

import numpy as np

from ..core import PackingWitness, XcoverInstance
from ..errors import BudgetError
from .budget import SolveBudget, Stopwatch


def _sets_containing(masks, universe_size: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(universe_size)]
    for idx, m in enumerate(masks):
        b = m
        while b:
            low = b & -b
            out[low.bit_length() - 1].append(idx)
            b ^= low
    return out


def solve_exact_cover_bfs(
    inst: XcoverInstance, budget: SolveBudget | None = None
) -> tuple[int, PackingWitness] | None:
    """Minimum-cardinality exact cover, or ``None`` if the universe cannot be partitioned.

    Breadth-first from the empty union towards the full mask.  Out of each
    union only sets through its lowest uncovered element are followed; every
    exact cover can be added in that order, so distances to the full mask are
    unchanged.  Frontiers are expanded layer by layer with array operations.
    """
    budget = budget or SolveBudget()
    family = inst.family
    u = family.universe_size
    if u > budget.max_universe_for_dp:
        raise BudgetError(f"universe {u} exceeds DP cap {budget.max_universe_for_dp}")
    full = family.full_mask
    if full == 0:
        return 0, PackingWitness(())

    containing = _sets_containing(family.masks, u)
    visited = np.zeros(1 << u, dtype=bool)
    pred = np.full(1 << u, -1, dtype=np.int32)
    visited[0] = True
    frontier = np.zeros(1, dtype=np.int64)
    depth = 0
    while frontier.size and not visited[full]:
        depth += 1
        lowest_gap = (~frontier) & (frontier + 1)
        element = np.bitwise_count(lowest_gap - 1).astype(np.int64)
        layer = []
        for e in np.unique(element):
            group = frontier[element == e]
            for idx in containing[int(e)]:
                m = family.masks[idx]
                nxt = group[(group & m) == 0] | m
                nxt = nxt[~visited[nxt]]
                if not nxt.size:
                    continue
                visited[nxt] = True
                pred[nxt] = idx
                layer.append(nxt)
        frontier = np.concatenate(layer) if layer else np.zeros(0, dtype=np.int64)
    if not visited[full]:
        return None
    chain = []
    mask = full
    while mask:
        idx = int(pred[mask])
        chain.append(idx)
        mask ^= family.masks[idx]
    assert len(chain) == depth
    return depth, PackingWitness(tuple(chain))


def solve_exact_cover_bnb(
    inst: XcoverInstance,
    budget: SolveBudget | None = None,
    r: int | None = None,
) -> tuple[bool, PackingWitness]:
    """Is there an exact cover using at most ``r`` sets?

    Branches on the lowest uncovered element over the sets that contain it
    and avoid the current union, in input order.
    """
    budget = budget or SolveBudget()
    r = inst.r if r is None else r
    family = inst.family
    full = family.full_mask
    if full == 0:
        return True, PackingWitness(())
    masks = family.masks
    containing = _sets_containing(masks, family.universe_size)
    largest = max((m.bit_count() for m in masks), default=0)
    if largest == 0:
        return False, PackingWitness(())
    watch = Stopwatch(budget)

    def dfs(union: int, chosen: list[int]):
        watch.tick()
        if union == full:
            return list(chosen)
        left = r - len(chosen)
        uncovered = full ^ union
        if left * largest < uncovered.bit_count():
            return None
        e = (uncovered & -uncovered).bit_length() - 1
        for idx in containing[e]:
            m = masks[idx]
            if m & union:
                continue
            chosen.append(idx)
            found = dfs(union | m, chosen)
            chosen.pop()
            if found is not None:
                return found
        return None

    found = dfs(0, [])
    if found is None:
        return False, PackingWitness(())
    return True, PackingWitness(tuple(found))
