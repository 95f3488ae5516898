"""Exact set packing: a 2^|U| mask dynamic program and a branch-and-bound search."""

from __future__ import annotations

import numpy as np

from ..core import PackingWitness, PspInstance, SetFamily
from ..errors import BudgetError
from .budget import SolveBudget, Stopwatch

UNREACHED = -1


def _submask_enumeration(mask: int) -> np.ndarray:
    """All submasks of ``mask`` as an int64 array (order: binary counting over its bits)."""
    out = np.zeros(1, dtype=np.int64)
    b = mask
    while b:
        low = b & -b
        out = np.concatenate((out, out | low))
        b ^= low
    return out


def packing_table(family: SetFamily, budget: SolveBudget | None = None):
    """Fill ``best`` and ``pred`` over every mask of the universe.

    ``best[mask]`` is the largest number of pairwise disjoint non-empty sets
    whose union is exactly ``mask`` (``-1`` if no packing has that union).
    ``pred[mask]`` is the index of the set holding the lowest element of
    ``mask`` in one such packing, so ``mask ^ sets[pred[mask]]`` steps back
    along an optimal chain.  Empty sets are ignored here.

    Every packing with union ``mask`` has exactly one set containing the
    lowest element of ``mask``, and that set's own lowest element is the same
    one.  Masks are therefore settled in decreasing order of their lowest
    element, each set only touching the supersets of itself that share its
    lowest element.  Sets are applied in index order with a strict
    improvement test, so the smallest index wins ties.
    """
    budget = budget or SolveBudget()
    u = family.universe_size
    if u > budget.max_universe_for_dp:
        raise BudgetError(
            f"universe {u} exceeds DP cap {budget.max_universe_for_dp}; use branch-and-bound"
        )
    size = 1 << u
    best = np.full(size, UNREACHED, dtype=np.int8)
    pred = np.full(size, -1, dtype=np.int32)
    best[0] = 0

    by_low: dict[int, list[int]] = {}
    seen: set[int] = set()
    for idx, m in enumerate(family.masks):
        if m == 0 or m in seen:
            continue
        seen.add(m)
        by_low.setdefault((m & -m).bit_length() - 1, []).append(idx)

    for e in range(u - 1, -1, -1):
        high_bits = u - e - 1
        room = (1 << high_bits) - 1
        for idx in by_low.get(e, ()):
            tail = family.masks[idx] >> (e + 1)
            free = _submask_enumeration(room ^ tail)
            src = free << (e + 1)
            got = best[src]
            ok = got != UNREACHED
            if not ok.any():
                continue
            target = ((free[ok] | tail) << (e + 1)) | (1 << e)
            cand = got[ok] + 1
            better = cand > best[target]
            target = target[better]
            best[target] = cand[better]
            pred[target] = idx
    return best, pred


def submask_max(best: np.ndarray, universe_size: int) -> np.ndarray:
    """``out[X] = max(best[M] for M subset of X)``."""
    out = best.copy()
    for b in range(universe_size):
        view = out.reshape(-1, 2, 1 << b)
        np.maximum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    return out


def chain_from_pred(family: SetFamily, pred: np.ndarray, mask: int) -> list[int]:
    """Walk predecessor links from ``mask`` back to the empty set."""
    out = []
    while mask:
        idx = int(pred[mask])
        if idx < 0:
            raise ValueError(f"mask {mask:#x} has no packing")
        out.append(idx)
        mask ^= family.masks[idx]
    return sorted(out)


def solve_set_packing_dp(
    inst: PspInstance | SetFamily, budget: SolveBudget | None = None
) -> tuple[int, PackingWitness]:
    """Maximum packing and the lexicographically smallest witness achieving it."""
    family = inst.family if isinstance(inst, PspInstance) else inst
    u = family.universe_size
    best, _ = packing_table(family, budget)
    within = submask_max(best, u)
    empties = [i for i, m in enumerate(family.masks) if m == 0]

    need = int(within[family.full_mask])
    chosen: list[int] = []
    free = family.full_mask
    for idx, m in enumerate(family.masks):
        if need == 0:
            break
        if m == 0 or m & ~free:
            continue
        if within[free ^ m] >= need - 1:
            chosen.append(idx)
            free ^= m
            need -= 1
    assert need == 0
    witness = PackingWitness(tuple(chosen + empties))
    return len(witness), witness


def clique_partition(masks: list[int], first_fit_limit: int = 4000) -> list[int]:
    """Assign each set a group id such that sets within a group pairwise intersect.

    First-fit over sets in index order; above ``first_fit_limit`` sets it
    falls back to grouping by lowest element, which is linear but coarser.
    A packing takes at most one set per group.
    """
    group = [0] * len(masks)
    if len(masks) > first_fit_limit:
        ids: dict[int, int] = {}
        for i, m in enumerate(masks):
            key = (m & -m).bit_length() if m else -1 - i
            group[i] = ids.setdefault(key, len(ids))
        return group
    members: list[list[int]] = []
    for i, m in enumerate(masks):
        for g, mem in enumerate(members):
            if m and all(m & x for x in mem):
                mem.append(m)
                group[i] = g
                break
        else:
            group[i] = len(members)
            members.append([m])
    return group


def solve_set_packing_bnb(
    inst: PspInstance,
    budget: SolveBudget | None = None,
    r: int | None = None,
) -> tuple[bool, PackingWitness]:
    """Is there a packing of at least ``r`` sets?

    Depth-first over sets in input order; each level keeps only later sets
    disjoint from everything chosen.  A branch is cut when the candidates
    left span fewer pairwise-intersecting groups (see ``clique_partition``)
    than picks still needed.  The first packing found is the
    lexicographically smallest one of size ``r``.
    """
    budget = budget or SolveBudget()
    r = inst.r if r is None else r
    if r == 0:
        return True, PackingWitness(())
    masks = list(inst.family.masks)
    if r > len(masks):
        return False, PackingWitness(())
    group = clique_partition(masks)
    watch = Stopwatch(budget)

    def dfs(cands: list[int], chosen: list[int]):
        watch.tick()
        need = r - len(chosen)
        if need == 0:
            return list(chosen)
        if len(cands) < need:
            return None
        reach = [0] * len(cands)
        seen: set[int] = set()
        for pos in range(len(cands) - 1, -1, -1):
            seen.add(group[cands[pos]])
            reach[pos] = len(seen)
        for pos, idx in enumerate(cands):
            if reach[pos] < need:
                break
            m = masks[idx]
            nxt = [j for j in cands[pos + 1 :] if not masks[j] & m]
            chosen.append(idx)
            found = dfs(nxt, chosen)
            chosen.pop()
            if found is not None:
                return found
        return None

    found = dfs(list(range(len(masks))), [])
    if found is None:
        return False, PackingWitness(())
    return True, PackingWitness(tuple(found))
