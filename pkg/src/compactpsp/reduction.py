"""From subgraph isomorphism to compact set packing, exact cover and vector sum.

For a host graph ``G`` on ``1..n`` and a pattern ``H`` with ``k`` edges and
``l`` vertices, every ordering of the pattern vertices gives one instance.
Position ``i`` owns ``d(v_i) + 1`` gadget blocks of ``N`` elements: a chain
block ``(i, 0)`` and one block ``(i, j)`` per neighbour ``v_j``.  Host vertex
``alpha`` is encoded by ``s_a[alpha-1]`` ("s^alpha") and its complement
``s_b[alpha-1]``.

* V-set ``VSet(alpha, i, beta)``: s^alpha on ``(i, 0)`` and on every
  ``(i, j)``, plus the complement of s^beta on the next chain block.
  Positions ``i < l`` need ``beta > alpha``; position ``l`` wraps to block
  ``(1, 0)`` and needs ``beta < alpha``.
* E-set ``ESet(alpha, beta, i, j)`` for pattern edge ``i < j`` and either
  orientation of host edge ``{alpha, beta}``: complement of s^alpha on
  ``(i, j)`` and complement of s^beta on ``(j, i)``.

The target is ``r = k + l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Iterator, Union

from .core import (
    Graph,
    Isomorphism,
    PackingWitness,
    PspInstance,
    SetFamily,
    SubIsoInstance,
    XcoverInstance,
    is_exact_cover,
    is_injective_homomorphism,
    is_packing,
)
from .errors import (
    ArgumentError,
    BudgetError,
    PreconditionError,
    SoundnessViolation,
    WitnessNotFoundError,
)
from .gadget import IssPair, build_compatible_iss, expected_pair_size
from .solvers.vecsum import VectorSumInstance

MODES = ("paper", "tight")
DEFAULT_MAX_ORDERING_VERTICES = 8

# Tags carried by SoundnessViolation, in the order lift checks them.
LIFT_CHECKS = (
    "classification",
    "set-counts",
    "coverage",
    "one-vertex-set-per-position",
    "chain-increasing",
    "edge-consistency",
    "homomorphism",
)


@dataclass(frozen=True)
class VSet:
    alpha: int
    i: int
    beta: int

    def to_json(self) -> dict:
        return {"kind": "V", "alpha": self.alpha, "i": self.i, "beta": self.beta}


@dataclass(frozen=True)
class ESet:
    alpha: int
    beta: int
    i: int
    j: int

    def to_json(self) -> dict:
        return {"kind": "E", "alpha": self.alpha, "beta": self.beta, "i": self.i, "j": self.j}


SetLabel = Union[VSet, ESet]


def label_from_json(obj) -> SetLabel | None:
    if obj is None:
        return None
    if obj["kind"] == "V":
        return VSet(obj["alpha"], obj["i"], obj["beta"])
    if obj["kind"] == "E":
        return ESet(obj["alpha"], obj["beta"], obj["i"], obj["j"])
    raise ArgumentError(f"unknown label kind {obj['kind']!r}")


def base_gadget_size(n: int, mode: str = "paper") -> int:
    """Elements per gadget block; both modes give at least ``n`` sets per side."""
    if n < 1:
        raise ArgumentError("need at least one host vertex")
    if mode == "paper":
        # ceil(log2(n + 1)) == n.bit_length()
        return 2 * n.bit_length() + 2
    if mode == "tight":
        size = 2
        while expected_pair_size(size) < n:
            size += 2
        return size
    raise ArgumentError(f"unknown gadget mode {mode!r}; expected one of {MODES}")


@lru_cache(maxsize=None)
def gadget_for(n_elems: int) -> IssPair:
    return build_compatible_iss(n_elems)


@dataclass(frozen=True)
class OrderedPattern:
    """Pattern graph plus an ordering: position ``i`` holds vertex ``p[i-1]``."""

    h: Graph
    p: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(v) for v in self.p))
        if sorted(self.p) != list(range(1, self.h.n + 1)):
            raise ArgumentError(f"{self.p} is not a permutation of 1..{self.h.n}")

    @property
    def ell(self) -> int:
        return self.h.n

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.p, start=1)}

    @cached_property
    def neighbor_positions(self) -> tuple[tuple[int, ...], ...]:
        """Entry ``i-1``: neighbour positions of ``v_i`` in increasing order."""
        return tuple(
            tuple(sorted(self.position[w] for w in self.h.neighbors(v))) for v in self.p
        )

    @cached_property
    def neighbor_rank(self) -> tuple[dict[int, int], ...]:
        """Entry ``i-1`` maps neighbour position ``j`` to its 1-based rank among ``v_i``'s neighbours."""
        return tuple(
            {j: lam for lam, j in enumerate(nbrs, start=1)} for nbrs in self.neighbor_positions
        )

    def degree(self, i: int) -> int:
        return len(self.neighbor_positions[i - 1])

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Pattern edges as position pairs ``(i, j)`` with ``i < j``, sorted."""
        out = []
        for u, v in self.h.edges:
            a, b = self.position[u], self.position[v]
            out.append((min(a, b), max(a, b)))
        return tuple(sorted(out))


def enumerate_orderings(
    h: Graph, max_vertices: int = DEFAULT_MAX_ORDERING_VERTICES
) -> Iterator[OrderedPattern]:
    if h.n > max_vertices:
        raise BudgetError(f"{h.n}! orderings exceeds the cap of {max_vertices} pattern vertices")
    for p in permutations(range(1, h.n + 1)):
        yield OrderedPattern(h, p)


def ordering_count(h: Graph) -> int:
    return math.factorial(h.n)


@dataclass(frozen=True)
class GadgetLayout:
    """Contiguous block of ``n_elems`` elements for every slot.

    Slots are ``(i, 0)`` for the chain block of position ``i`` and ``(i, j)``
    for its block facing neighbour position ``j``.  Blocks are laid out by
    position, chain block first, then neighbour blocks by rank.
    """

    n_elems: int
    slots: tuple[tuple[int, int], ...]

    @classmethod
    def for_pattern(cls, pattern: OrderedPattern, n_elems: int) -> GadgetLayout:
        slots = []
        for i in range(1, pattern.ell + 1):
            slots.append((i, 0))
            slots.extend((i, j) for j in pattern.neighbor_positions[i - 1])
        return cls(n_elems, tuple(slots))

    @cached_property
    def start(self) -> dict[tuple[int, int], int]:
        return {slot: k * self.n_elems for k, slot in enumerate(self.slots)}

    def block(self, slot: tuple[int, int]) -> range:
        s = self.start[slot]
        return range(s, s + self.n_elems)

    @property
    def universe_size(self) -> int:
        return len(self.slots) * self.n_elems

    def place(self, mask: int, slot: tuple[int, int]) -> int:
        return mask << self.start[slot]

    def read(self, mask: int, slot: tuple[int, int]) -> int:
        return (mask >> self.start[slot]) & ((1 << self.n_elems) - 1)

    def _region(self, chain: bool) -> int:
        block = (1 << self.n_elems) - 1
        out = 0
        for slot in self.slots:
            if (slot[1] == 0) == chain:
                out |= self.place(block, slot)
        return out

    @cached_property
    def u0_mask(self) -> int:
        """All chain blocks."""
        return self._region(True)

    @cached_property
    def u1_mask(self) -> int:
        """All neighbour blocks."""
        return self._region(False)

    def to_json(self) -> list[dict]:
        return [
            {"slot": list(slot), "start": self.start[slot], "stop": self.start[slot] + self.n_elems}
            for slot in self.slots
        ]


@dataclass(frozen=True)
class ReducedPspInstance:
    """One reduced instance with everything needed to explain each set.

    ``inst`` is a ``PspInstance`` or, for exact-cover semantics, an
    ``XcoverInstance``; the family is identical in both cases.
    """

    inst: PspInstance | XcoverInstance
    layout: GadgetLayout
    pattern: OrderedPattern
    gadget: IssPair
    set_labels: tuple[SetLabel, ...]
    source: SubIsoInstance
    mode: str

    @property
    def family(self) -> SetFamily:
        return self.inst.family

    @property
    def r(self) -> int:
        return self.inst.r

    @property
    def semantics(self) -> str:
        return "xcover" if isinstance(self.inst, XcoverInstance) else "psp"

    @cached_property
    def index_of(self) -> dict[SetLabel, int]:
        return {lab: i for i, lab in enumerate(self.set_labels)}

    @property
    def v_set_count(self) -> int:
        return sum(isinstance(lab, VSet) for lab in self.set_labels)

    @property
    def e_set_count(self) -> int:
        return sum(isinstance(lab, ESet) for lab in self.set_labels)

    @cached_property
    def gadget_index(self) -> tuple[dict[int, int], dict[int, int]]:
        """Block contents back to host vertex, for s^alpha and for its complement."""
        return (
            {m: k + 1 for k, m in enumerate(self.gadget.a_masks)},
            {m: k + 1 for k, m in enumerate(self.gadget.b_masks)},
        )

    def materialize(self, label: SetLabel) -> int:
        """Rebuild a set's mask from its label and the gadget."""
        lay, pat, ell = self.layout, self.pattern, self.pattern.ell
        s, sbar = self.gadget.a_masks, self.gadget.b_masks
        if isinstance(label, VSet):
            i, a, b = label.i, label.alpha, label.beta
            nxt = i + 1 if i < ell else 1
            mask = lay.place(s[a - 1], (i, 0)) | lay.place(sbar[b - 1], (nxt, 0))
            for j in pat.neighbor_positions[i - 1]:
                mask |= lay.place(s[a - 1], (i, j))
            return mask
        return lay.place(sbar[label.alpha - 1], (label.i, label.j)) | lay.place(
            sbar[label.beta - 1], (label.j, label.i)
        )


def _resolve_gadget(n: int, mode: str, gadget: IssPair | None) -> IssPair:
    if gadget is None:
        gadget = gadget_for(base_gadget_size(n, mode))
    if gadget.m_sets < n:
        raise PreconditionError(
            f"gadget has {gadget.m_sets} sets per side but the host has {n} vertices"
        )
    return gadget


def _labels(inst: SubIsoInstance, pattern: OrderedPattern) -> list[SetLabel]:
    n, ell = inst.g.n, pattern.ell
    labels: list[SetLabel] = []
    for i in range(1, ell + 1):
        for a in range(1, n + 1):
            betas = range(a + 1, n + 1) if i < ell else range(1, a)
            labels.extend(VSet(a, i, b) for b in betas)
    for i, j in pattern.edges:
        for u, v in inst.g.edges:
            labels.append(ESet(u, v, i, j))
            labels.append(ESet(v, u, i, j))
    return labels


def build_psp_instance(
    inst: SubIsoInstance,
    pattern: OrderedPattern,
    mode: str = "paper",
    gadget: IssPair | None = None,
) -> ReducedPspInstance:
    if pattern.h != inst.h:
        raise ArgumentError("ordering belongs to a different pattern graph")
    gadget = _resolve_gadget(inst.g.n, mode, gadget)
    layout = GadgetLayout.for_pattern(pattern, gadget.n_elems)
    labels = _labels(inst, pattern)
    proto = ReducedPspInstance(
        PspInstance(SetFamily(layout.universe_size), 0),
        layout,
        pattern,
        gadget,
        tuple(labels),
        inst,
        mode,
    )
    masks = [proto.materialize(lab) for lab in labels]
    if len(set(masks)) != len(masks):
        raise AssertionError("distinct labels produced identical sets")
    family = SetFamily.from_masks(layout.universe_size, masks, labels)
    r = inst.h.edge_count + pattern.ell
    return ReducedPspInstance(
        PspInstance(family, r), layout, pattern, gadget, tuple(labels), inst, mode
    )


def build_xcover_instance(
    inst: SubIsoInstance,
    pattern: OrderedPattern,
    mode: str = "paper",
    gadget: IssPair | None = None,
) -> ReducedPspInstance:
    red = build_psp_instance(inst, pattern, mode, gadget)
    return as_xcover(red)


def as_xcover(red: ReducedPspInstance) -> ReducedPspInstance:
    return ReducedPspInstance(
        XcoverInstance(red.family, red.r),
        red.layout,
        red.pattern,
        red.gadget,
        red.set_labels,
        red.source,
        red.mode,
    )


def sort_pattern_for(inst: SubIsoInstance, phi: Isomorphism) -> OrderedPattern:
    """Ordering of the pattern vertices under which ``phi``'s images increase."""
    if len(phi.map) != inst.h.n:
        raise ArgumentError("map length does not match the pattern")
    if len(set(phi.map)) != len(phi.map):
        raise ArgumentError(f"map {phi.map} is not injective")
    p = sorted(range(1, inst.h.n + 1), key=lambda v: phi.map[v - 1])
    return OrderedPattern(inst.h, tuple(p))


def embed_isomorphism_as_packing(red: ReducedPspInstance, phi: Isomorphism) -> PackingWitness:
    """The ``k + l`` sets spelling out ``phi`` in the given ordering's instance.

    Raises ``WitnessNotFoundError`` naming the first required set that is not
    in the family, which is what happens when the images are not increasing
    along the ordering or ``phi`` misses a host edge.
    """
    pat, ell = red.pattern, red.pattern.ell
    if len(phi.map) != ell:
        raise ArgumentError("map length does not match the pattern")
    alpha = [phi(v) for v in pat.p]
    wanted: list[SetLabel] = []
    for i in range(1, ell + 1):
        nxt = alpha[i] if i < ell else alpha[0]
        wanted.append(VSet(alpha[i - 1], i, nxt))
    for i, j in pat.edges:
        wanted.append(ESet(alpha[i - 1], alpha[j - 1], i, j))
    picked = []
    for lab in wanted:
        idx = red.index_of.get(lab)
        if idx is None:
            raise WitnessNotFoundError(f"reduced family has no set {lab}", lab)
        picked.append(idx)
    w = PackingWitness(tuple(picked))
    assert len(w) == red.r
    assert is_packing(red.family, w) and is_exact_cover(red.family, w)
    return w


def _classify(red: ReducedPspInstance, mask: int):
    """Decode a set from its bits alone.

    Returns ``("V", i, alpha, beta)`` when some chain block ``(i, 0)`` holds
    s^alpha, else ``("E", i, j, alpha, beta)`` read from its two occupied
    neighbour blocks, else ``None``.
    """
    lay, ell = red.layout, red.pattern.ell
    a_index, b_index = red.gadget_index
    for i in range(1, ell + 1):
        alpha = a_index.get(lay.read(mask, (i, 0)))
        if alpha is not None:
            nxt = i + 1 if i < ell else 1
            beta = b_index.get(lay.read(mask, (nxt, 0)))
            return ("V", i, alpha, beta)
    occupied = [slot for slot in lay.slots if slot[1] and lay.read(mask, slot)]
    if len(occupied) == 2:
        (i, j), (j2, i2) = occupied
        if (i2, j2) == (i, j):
            return (
                "E",
                i,
                j,
                b_index.get(lay.read(mask, (i, j))),
                b_index.get(lay.read(mask, (j, i))),
            )
    return None


def lift_packing_to_isomorphism(red: ReducedPspInstance, w) -> Isomorphism:
    """Recover ``phi`` from an ``r``-packing (or exact cover within budget).

    Every structural fact the recovery relies on is checked and reported as a
    ``SoundnessViolation`` tagged with one of ``LIFT_CHECKS``.
    """
    w = w if isinstance(w, PackingWitness) else PackingWitness(tuple(w))
    fam, pat, ell, k = red.family, red.pattern, red.pattern.ell, red.source.h.edge_count
    g = red.source.g
    if red.semantics == "psp":
        if len(w) != red.r or not is_packing(fam, w):
            raise PreconditionError(f"expected a packing of exactly {red.r} sets, got {len(w)}")
    elif len(w) > red.r or not is_exact_cover(fam, w):
        raise PreconditionError(f"expected an exact cover of at most {red.r} sets")

    v_sets: dict[int, tuple[int, int | None]] = {}
    e_sets: list[tuple[int, int, int | None, int | None]] = []
    n_v = 0
    for idx in w.indices:
        kind = _classify(red, fam.masks[idx])
        lab = fam.label(idx)
        if kind is None or (lab is not None and (kind[0] == "V") != isinstance(lab, VSet)):
            raise SoundnessViolation("classification", f"set {idx} ({lab}) decodes as {kind}")
        if kind[0] == "V":
            n_v += 1
            v_sets.setdefault(kind[1], (kind[2], kind[3]))
        else:
            e_sets.append(kind[1:])

    if n_v != ell or len(e_sets) != k:
        raise SoundnessViolation(
            "set-counts", f"{n_v} vertex sets and {len(e_sets)} edge sets, expected {ell} and {k}"
        )
    union = 0
    for idx in w.indices:
        union |= fam.masks[idx]
    if union != fam.full_mask:
        raise SoundnessViolation("coverage", "witness leaves elements uncovered")
    if sorted(v_sets) != list(range(1, ell + 1)):
        raise SoundnessViolation(
            "one-vertex-set-per-position", f"positions covered: {sorted(v_sets)}"
        )
    alpha = [v_sets[i][0] for i in range(1, ell + 1)]
    for i in range(1, ell + 1):
        beta = v_sets[i][1]
        expected = alpha[i] if i < ell else alpha[0]
        if beta != expected:
            raise SoundnessViolation(
                "chain-increasing", f"position {i} links to {beta}, next vertex is {expected}"
            )
    if any(alpha[i] >= alpha[i + 1] for i in range(ell - 1)):
        raise SoundnessViolation("chain-increasing", f"images {alpha} are not increasing")

    seen_edges = set()
    for i, j, a, b in e_sets:
        if (a, b) != (alpha[i - 1], alpha[j - 1]) or not g.has_edge(a, b):
            raise SoundnessViolation(
                "edge-consistency",
                f"edge set on pattern edge ({i}, {j}) carries ({a}, {b}), "
                f"vertex sets say ({alpha[i - 1]}, {alpha[j - 1]})",
            )
        seen_edges.add((i, j))
    if seen_edges != set(pat.edges):
        raise SoundnessViolation("edge-consistency", "pattern edges not covered once each")

    image = [0] * ell
    for i, v in enumerate(pat.p, start=1):
        image[v - 1] = alpha[i - 1]
    phi = Isomorphism(image)
    if not is_injective_homomorphism(red.source, phi):
        raise SoundnessViolation("homomorphism", f"lifted map {phi.map} is not a homomorphism")
    return phi


def vectorize_instance(red: ReducedPspInstance) -> VectorSumInstance:
    """Characteristic vectors plus ``l`` vertex-indicator and ``2k`` edge-indicator bits.

    Coordinates ``[0, |U|)`` copy the set.  A V-set at position ``i`` adds
    coordinate ``|U| + i - 1``.  An E-set on pattern edge ``(i, j)`` adds the
    edge-indicator coordinate of ``j`` within ``i``'s neighbour list and of
    ``i`` within ``j``'s.  The target is all ones.
    """
    if len(red.set_labels) != len(red.family) or None in red.set_labels:
        raise ArgumentError("vectorize needs a labelled reduced instance")
    pat, ell = red.pattern, red.pattern.ell
    k = red.source.h.edge_count
    u = red.family.universe_size
    dim = u + ell + 2 * k
    offset = [0] * (ell + 1)
    for i in range(1, ell + 1):
        offset[i] = offset[i - 1] + pat.degree(i)

    def edge_bit(i: int, j: int) -> int:
        return u + ell + offset[i - 1] + pat.neighbor_rank[i - 1][j] - 1

    vectors = []
    for mask, lab in zip(red.family.masks, red.set_labels):
        if isinstance(lab, VSet):
            vectors.append(mask | 1 << (u + lab.i - 1))
        else:
            vectors.append(mask | 1 << edge_bit(lab.i, lab.j) | 1 << edge_bit(lab.j, lab.i))
    return VectorSumInstance(
        dim=dim,
        vectors=tuple(vectors),
        target=(1 << dim) - 1,
        r=red.r,
        labels=red.set_labels,
        indicator_blocks=((u, u + ell), (u + ell, dim)),
    )


def compactness_ratio(universe_size: int, r: int, set_count: int) -> float:
    """``|U| / (r * log2 |S|)``; ``nan`` when the denominator vanishes."""
    denom = r * math.log2(set_count) if set_count > 1 else 0.0
    return universe_size / denom if denom else float("nan")
