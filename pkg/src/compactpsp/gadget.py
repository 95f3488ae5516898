"""Compatible intersecting set system (ISS) pairs.

An ISS is a family whose sets pairwise intersect.  A compatible pair
``(S_A, S_B)`` is two ISS over the same ``N`` elements with a bijection
``s_a[i] -> s_b[i]`` such that partners are disjoint and swapping any set for
its partner keeps the family intersecting.  The construction here takes every
``N/2``-subset in combination order and keeps the first of each complementary
pair, so ``s_b[i]`` is always the complement of ``s_a[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .core import BitSet, SetFamily
from .errors import ArgumentError

DEFAULT_MAX_ELEMS = 32


@dataclass(frozen=True)
class IssPair:
    """``s_b[i]`` is the partner of ``s_a[i]``; all sets have ``n_elems/2`` elements."""

    n_elems: int
    m_sets: int
    s_a: tuple[BitSet, ...]
    s_b: tuple[BitSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "s_a", tuple(self.s_a))
        object.__setattr__(self, "s_b", tuple(self.s_b))
        if len(self.s_a) != self.m_sets or len(self.s_b) != self.m_sets:
            raise ArgumentError("s_a and s_b must both hold m_sets sets")

    @property
    def a_masks(self) -> list[int]:
        return [s.bits for s in self.s_a]

    @property
    def b_masks(self) -> list[int]:
        return [s.bits for s in self.s_b]

    def family_a(self) -> SetFamily:
        return SetFamily(self.n_elems, self.s_a)

    def family_b(self) -> SetFamily:
        return SetFamily(self.n_elems, self.s_b)


def expected_pair_size(n_elems: int) -> int:
    """Number of sets the greedy produces: C(N, N/2) / 2."""
    return comb(n_elems, n_elems // 2) // 2


def build_compatible_iss(n_elems: int, max_elems: int = DEFAULT_MAX_ELEMS) -> IssPair:
    if n_elems < 2 or n_elems % 2:
        raise ArgumentError(f"n_elems must be even and >= 2, got {n_elems}")
    if n_elems > max_elems:
        raise ArgumentError(f"n_elems={n_elems} exceeds cap {max_elems}")
    half = n_elems // 2
    full = (1 << n_elems) - 1
    marked: set[int] = set()
    s_a: list[BitSet] = []
    s_b: list[BitSet] = []
    for combo in combinations(range(n_elems), half):
        mask = 0
        for e in combo:
            mask |= 1 << e
        if mask in marked:
            continue
        other = full ^ mask
        marked.add(mask)
        marked.add(other)
        s_a.append(BitSet(n_elems, mask))
        s_b.append(BitSet(n_elems, other))
    return IssPair(n_elems, len(s_a), tuple(s_a), tuple(s_b))


def _as_array(masks: Sequence[int], width: int):
    if width <= 64:
        return np.array(masks, dtype=np.uint64)
    return None


def _disjoint_from(arr, masks: Sequence[int], probe: int) -> np.ndarray:
    """Indices ``j`` with ``masks[j] & probe == 0``."""
    if arr is not None:
        return np.flatnonzero((arr & np.uint64(probe)) == 0)
    return np.array([j for j, m in enumerate(masks) if not m & probe], dtype=np.int64)


def first_disjoint_pair(sets: Sequence[BitSet]) -> tuple[int, int] | None:
    """Lexicographically first ``(i, j)``, ``i < j``, with empty intersection."""
    if not sets:
        return None
    width = sets[0].width
    if any(s.width != width for s in sets):
        raise ArgumentError("sets have mismatched widths")
    masks = [s.bits for s in sets]
    arr = _as_array(masks, width)
    for i, m in enumerate(masks):
        hits = _disjoint_from(arr, masks, m)
        hits = hits[hits > i]
        if hits.size:
            return i, int(hits[0])
    return None


def is_intersecting_family(sets: Sequence[BitSet]) -> bool:
    return first_disjoint_pair(sets) is None


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    counterexample: object = None


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[PropertyCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[PropertyCheck]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> PropertyCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "counterexample": c.counterexample}
                for c in self.checks
            ],
        }


def _exchange_failure(own: list[int], partner: list[int], width: int):
    """First ``i`` for which ``(own minus own[i]) plus partner[i]`` is not intersecting.

    Returns ``(i, detail)`` or ``None``.
    """
    arr = _as_array(own, width)
    # indices that lie on every disjoint pair of `own`; removing one of them
    # is the only way the remainder can still be intersecting
    hitting: set[int] | None = None
    for i, m in enumerate(own):
        hits = _disjoint_from(arr, own, m)
        for j in hits[hits > i]:
            pair = {i, int(j)}
            hitting = pair if hitting is None else hitting & pair
            if not hitting:
                break
        if hitting is not None and not hitting:
            break
    for i, p in enumerate(partner):
        if hitting is not None and i not in hitting:
            return i, "remaining family has a disjoint pair"
        hits = _disjoint_from(arr, own, p)
        hits = hits[hits != i]
        if hits.size:
            return i, f"partner disjoint from set {int(hits[0])}"
    return None


def check_compatible_pair(pair: IssPair) -> ValidationReport:
    width = pair.n_elems
    a, b = pair.a_masks, pair.b_masks
    checks = []

    for name, fam in (("a_intersecting", pair.s_a), ("b_intersecting", pair.s_b)):
        bad = first_disjoint_pair(fam) if fam else None
        checks.append(PropertyCheck(name, bad is None, list(bad) if bad else None))

    bad_disjoint = next((i for i in range(pair.m_sets) if a[i] & b[i]), None)
    checks.append(PropertyCheck("complement_disjointness", bad_disjoint is None, bad_disjoint))

    exchange = None
    fail = _exchange_failure(a, b, width)
    if fail is not None:
        exchange = {"side": "a", "index": fail[0], "detail": fail[1]}
    else:
        fail = _exchange_failure(b, a, width)
        if fail is not None:
            exchange = {"side": "b", "index": fail[0], "detail": fail[1]}
    checks.append(PropertyCheck("complement_exchange", exchange is None, exchange))
    return ValidationReport(tuple(checks))
