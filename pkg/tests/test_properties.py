"""Randomised invariants, driven by hypothesis."""

from __future__ import annotations

from itertools import combinations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from compactpsp import io
from compactpsp.core import (
    BitSet,
    Graph,
    PspInstance,
    SetFamily,
    SubIsoInstance,
    XcoverInstance,
    is_exact_cover,
    is_injective_homomorphism,
    is_packing,
    restrict,
)
from compactpsp.generators import PATTERNS
from compactpsp.reduction import (
    OrderedPattern,
    build_psp_instance,
    embed_isomorphism_as_packing,
    lift_packing_to_isomorphism,
    sort_pattern_for,
    vectorize_instance,
)
from compactpsp.solvers import (
    VectorSumInstance,
    solve_exact_cover_bfs,
    solve_exact_cover_bnb,
    solve_set_packing_bnb,
    solve_set_packing_dp,
    solve_subiso_bruteforce,
    solve_vector_sum,
    xor_of,
)
from oracles import max_packing, min_exact_cover, vector_sum_exists

FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def bitsets(draw, width=None):
    w = draw(st.integers(0, 70)) if width is None else width
    return BitSet(w, draw(st.integers(0, (1 << w) - 1)))


@st.composite
def bitset_pairs_and_block(draw):
    w = draw(st.integers(1, 40))
    a, b = draw(bitsets(w)), draw(bitsets(w))
    start = draw(st.integers(0, w))
    stop = draw(st.integers(start, w))
    return a, b, (start, stop)


@st.composite
def families(draw, max_u=10, max_s=10):
    u = draw(st.integers(0, max_u))
    masks = draw(st.lists(st.integers(0, (1 << u) - 1), max_size=max_s))
    return SetFamily.from_masks(u, masks)


@st.composite
def graphs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, tuple(p for p, k in zip(pairs, keep) if k))


@st.composite
def reduced_cases(draw):
    name = draw(st.sampled_from(["edge", "p3", "k3", "c4", "paw"]))
    h = PATTERNS[name]
    g = draw(graphs(min_n=2, max_n=5))
    p = draw(st.permutations(range(1, h.n + 1)))
    mode = draw(st.sampled_from(["paper", "tight"]))
    inst = SubIsoInstance(g, h)
    return inst, build_psp_instance(inst, OrderedPattern(h, tuple(p)), mode)


class TestBitSetLaws:
    @given(bitsets())
    def test_complement_partitions(self, s):
        c = s.complement()
        assert (s | c) == BitSet.full(s.width)
        assert (s & c).bits == 0

    @given(bitset_pairs_and_block())
    def test_restrict_distributes(self, case):
        a, b, block = case
        assert restrict(a | b, block) == restrict(a, block) | restrict(b, block)
        assert restrict(a & b, block) == restrict(a, block) & restrict(b, block)

    @given(bitsets())
    def test_roundtrip(self, s):
        assert io.bitset_from_json(io.bitset_to_json(s)) == s


class TestPackingLaws:
    @given(families())
    def test_empty_witness_packs(self, fam):
        assert is_packing(fam, [])

    @given(families(max_u=8), st.data())
    def test_overlap_breaks_packing(self, fam, data):
        nonempty = [i for i, m in enumerate(fam.masks) if m]
        if len(nonempty) < 2:
            return
        i = data.draw(st.sampled_from(nonempty))
        j = data.draw(st.sampled_from([k for k in nonempty if k != i]))
        if fam.masks[i] & fam.masks[j]:
            assert not is_packing(fam, [i, j])
        else:
            assert is_packing(fam, [i, j])

    @given(families(), st.integers(0, 5))
    def test_family_roundtrip(self, fam, r):
        assert io.psp_from_json(io.psp_to_json(PspInstance(fam, r))) == PspInstance(fam, r)

    @given(graphs())
    def test_graph_roundtrip(self, g):
        assert io.graph_from_json(io.graph_to_json(g)) == g


class TestSolverAgreement:
    @FAST
    @given(families(max_u=10, max_s=12))
    def test_dp_equals_brute_force(self, fam):
        best, w = solve_set_packing_dp(fam)
        assert best == max_packing(list(fam.masks))
        assert len(w) == best and is_packing(fam, w)

    @FAST
    @given(families(max_u=10, max_s=12))
    def test_bnb_equals_dp_for_every_r(self, fam):
        best, _ = solve_set_packing_dp(fam)
        for r in range(best + 2):
            assert solve_set_packing_bnb(PspInstance(fam, r))[0] == (r <= best)

    @FAST
    @given(families(max_u=10, max_s=12))
    def test_bfs_minimal_and_bnb_consistent(self, fam):
        out = solve_exact_cover_bfs(XcoverInstance(fam, 0))
        ref = min_exact_cover(list(fam.masks), fam.full_mask)
        assert (out[0] if out else None) == ref
        for r in range(4):
            found, w = solve_exact_cover_bnb(XcoverInstance(fam, r))
            assert found == (ref is not None and ref <= r)
            assert not found or is_exact_cover(fam, w)

    @FAST
    @given(
        st.integers(1, 8).flatmap(
            lambda d: st.tuples(
                st.just(d),
                st.lists(st.integers(0, (1 << d) - 1), max_size=8),
                st.integers(0, (1 << d) - 1),
                st.integers(0, 4),
            )
        )
    )
    def test_vector_sum_equals_enumeration(self, case):
        d, vectors, target, r = case
        found, idx = solve_vector_sum(VectorSumInstance(d, vectors, target, r))
        assert found == vector_sum_exists(vectors, target, r)


class TestReductionLaws:
    @FAST
    @given(reduced_cases())
    def test_layout_sizes_and_labels(self, case):
        inst, red = case
        g, h = inst.g, inst.h
        slots = [x for s in red.layout.slots for x in red.layout.block(s)]
        assert sorted(slots) == list(range(red.family.universe_size))
        assert red.family.universe_size == (h.n + 2 * h.edge_count) * red.gadget.n_elems
        assert red.r == h.n + h.edge_count
        assert red.v_set_count == h.n * g.n * (g.n - 1) // 2
        assert red.e_set_count == 2 * g.edge_count * h.edge_count
        for mask, lab in zip(red.family.masks, red.set_labels):
            assert red.materialize(lab) == mask

    @FAST
    @given(reduced_cases())
    def test_found_packings_lift(self, case):
        inst, red = case
        found, w = solve_set_packing_bnb(red.inst)
        if found:
            phi = lift_packing_to_isomorphism(red, w)
            assert is_injective_homomorphism(inst, phi)
            images = [phi(v) for v in red.pattern.p]
            assert images == sorted(images)

    @FAST
    @given(graphs(min_n=2, max_n=5), st.sampled_from(["edge", "p3", "k3", "c4", "paw"]))
    def test_isomorphisms_embed(self, g, name):
        inst = SubIsoInstance(g, PATTERNS[name])
        phi = solve_subiso_bruteforce(inst)
        if phi is None:
            return
        red = build_psp_instance(inst, sort_pattern_for(inst, phi), "tight")
        w = embed_isomorphism_as_packing(red, phi)
        assert len(w) == red.r
        assert is_packing(red.family, w) and is_exact_cover(red.family, w)
        assert lift_packing_to_isomorphism(red, w) == phi

    @FAST
    @given(reduced_cases())
    def test_vector_view_matches_cover(self, case):
        inst, red = case
        vec = vectorize_instance(red)
        assert vec.dim == red.family.universe_size + inst.h.n + 2 * inst.h.edge_count
        found_v, idx = solve_vector_sum(vec)
        found_c, w = solve_exact_cover_bnb(XcoverInstance(red.family, red.r))
        assert found_v == found_c
        if found_v:
            assert is_exact_cover(red.family, idx)
        if found_c:
            assert xor_of(vec, w.indices) == vec.target
