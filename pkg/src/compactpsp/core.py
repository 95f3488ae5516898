"""Value types for set systems, graphs, problem instances and witnesses.

Elements and vertices follow two conventions.  Set elements are 0-indexed
inside the package and 1-indexed in every external format (see ``io``).
Graph vertices are always ``1..n``.

A set is stored as a Python ``int`` whose bit ``e`` is element ``e``; all
types are frozen and safe to share between threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import ArgumentError, RangeError


def _block_bounds(block) -> tuple[int, int]:
    if isinstance(block, range):
        if block.step != 1:
            raise ArgumentError("blocks must be contiguous (step 1)")
        return block.start, block.stop
    start, stop = block
    return int(start), int(stop)


@dataclass(frozen=True)
class BitSet:
    """A subset of ``{0, ..., width-1}``."""

    width: int
    bits: int = 0

    def __post_init__(self):
        if self.width < 0:
            raise ArgumentError(f"negative width {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise ArgumentError(f"bits set at or above width {self.width}")

    @classmethod
    def from_elements(cls, width: int, elements: Iterable[int]) -> BitSet:
        bits = 0
        for e in elements:
            if not 0 <= e < width:
                raise RangeError(f"element {e} outside [0, {width})")
            bits |= 1 << e
        return cls(width, bits)

    @classmethod
    def full(cls, width: int) -> BitSet:
        return cls(width, (1 << width) - 1)

    def elements(self) -> list[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.cardinality()

    def __contains__(self, e: int) -> bool:
        return 0 <= e < self.width and bool(self.bits >> e & 1)

    def _check(self, other: BitSet) -> None:
        if self.width != other.width:
            raise ArgumentError(f"width mismatch {self.width} != {other.width}")

    def __and__(self, other: BitSet) -> BitSet:
        self._check(other)
        return BitSet(self.width, self.bits & other.bits)

    def __or__(self, other: BitSet) -> BitSet:
        self._check(other)
        return BitSet(self.width, self.bits | other.bits)

    def isdisjoint(self, other: BitSet) -> bool:
        self._check(other)
        return not self.bits & other.bits

    def complement(self) -> BitSet:
        return complement(self)

    def restrict(self, block) -> BitSet:
        return restrict(self, block)


def restrict(s: BitSet, block) -> BitSet:
    """Intersect ``s`` with a contiguous block, re-based to block coordinates."""
    start, stop = _block_bounds(block)
    if not 0 <= start <= stop <= s.width:
        raise RangeError(f"block [{start}, {stop}) outside [0, {s.width})")
    length = stop - start
    return BitSet(length, (s.bits >> start) & ((1 << length) - 1))


def complement(s: BitSet) -> BitSet:
    return BitSet(s.width, ((1 << s.width) - 1) ^ s.bits)


@dataclass(frozen=True)
class SetFamily:
    """A universe ``{0..universe_size-1}`` and an ordered list of sets over it.

    ``labels`` is either empty or holds one provenance tag per set.
    """

    universe_size: int
    sets: tuple[BitSet, ...] = ()
    labels: tuple[Hashable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.universe_size < 0:
            raise ArgumentError("negative universe size")
        for i, s in enumerate(self.sets):
            if s.width != self.universe_size:
                raise ArgumentError(
                    f"set {i} has width {s.width}, universe is {self.universe_size}"
                )
        if self.labels and len(self.labels) != len(self.sets):
            raise ArgumentError("labels must be empty or one per set")

    @classmethod
    def from_masks(
        cls, universe_size: int, masks: Iterable[int], labels: Sequence[Hashable] = ()
    ) -> SetFamily:
        return cls(universe_size, tuple(BitSet(universe_size, m) for m in masks), tuple(labels))

    @classmethod
    def from_lists(
        cls,
        universe_size: int,
        sets: Iterable[Iterable[int]],
        labels: Sequence[Hashable] = (),
    ) -> SetFamily:
        return cls(
            universe_size,
            tuple(BitSet.from_elements(universe_size, s) for s in sets),
            tuple(labels),
        )

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(s.bits for s in self.sets)

    @property
    def full_mask(self) -> int:
        return (1 << self.universe_size) - 1

    def __len__(self) -> int:
        return len(self.sets)

    def label(self, i: int):
        return self.labels[i] if self.labels else None


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n``.

    Edges are canonicalised to ``(u, v)`` with ``u < v`` and kept sorted, so
    two graphs with the same edge set compare equal.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ArgumentError("negative vertex count")
        canon = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ArgumentError(f"self-loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise RangeError(f"edge ({u}, {v}) outside vertices 1..{self.n}")
            canon.append((min(u, v), max(u, v)))
        if len(set(canon)) != len(canon):
            raise ArgumentError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]


@dataclass(frozen=True)
class SubIsoInstance:
    """Host graph ``g`` and pattern ``h``; asks for an injective homomorphism h -> g."""

    g: Graph
    h: Graph

    def __post_init__(self):
        if self.h.edge_count < 1:
            raise ArgumentError("pattern must have at least one edge")
        isolated = [v for v in range(1, self.h.n + 1) if self.h.degree(v) == 0]
        if isolated:
            raise ArgumentError(f"pattern has isolated vertices {isolated}")
        assert 2 <= self.h.n <= 2 * self.h.edge_count


@dataclass(frozen=True)
class PspInstance:
    """Decision form of set packing: are there ``r`` pairwise disjoint sets?"""

    family: SetFamily
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise ArgumentError(f"negative target r={self.r}")


@dataclass(frozen=True)
class XcoverInstance:
    """Exact cover with budget: a partition of the universe by at most ``r`` sets?"""

    family: SetFamily
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise ArgumentError(f"negative budget r={self.r}")


@dataclass(frozen=True)
class PackingWitness:
    """Positions into ``family.sets``; stored sorted."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise ArgumentError("witness indices must be distinct")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True)
class Isomorphism:
    """``map[v-1]`` is the host vertex assigned to pattern vertex ``v``."""

    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(a) for a in self.map))
        if len(set(self.map)) != len(self.map):
            raise ArgumentError(f"map {self.map} is not injective")

    @classmethod
    def unchecked(cls, values: Sequence[int]) -> Isomorphism:
        """Build without the injectivity check, for testing rejection paths."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "map", tuple(int(a) for a in values))
        return obj

    def __call__(self, v: int) -> int:
        return self.map[v - 1]


def _check_indices(family: SetFamily, w: PackingWitness) -> None:
    for i in w.indices:
        if not 0 <= i < len(family.sets):
            raise RangeError(f"witness index {i} outside [0, {len(family.sets)})")


def _indices(w) -> PackingWitness:
    return w if isinstance(w, PackingWitness) else PackingWitness(tuple(w))


def is_packing(family: SetFamily, w) -> bool:
    w = _indices(w)
    _check_indices(family, w)
    union = 0
    for i in w.indices:
        m = family.sets[i].bits
        if union & m:
            return False
        union |= m
    return True


def is_exact_cover(family: SetFamily, w) -> bool:
    w = _indices(w)
    if not is_packing(family, w):
        return False
    union = 0
    for i in w.indices:
        union |= family.sets[i].bits
    return union == family.full_mask


def is_injective_homomorphism(inst: SubIsoInstance, phi: Isomorphism) -> bool:
    if len(phi.map) != inst.h.n:
        raise ArgumentError(f"map has length {len(phi.map)}, pattern has {inst.h.n} vertices")
    if len(set(phi.map)) != len(phi.map):
        return False
    if any(not 1 <= a <= inst.g.n for a in phi.map):
        return False
    return all(inst.g.has_edge(phi.map[u - 1], phi.map[v - 1]) for u, v in inst.h.edges)
