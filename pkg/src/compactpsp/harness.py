"""End-to-end equivalence runs and compactness measurements.

``verify_equivalence`` decides one (G, H) pair four ways: brute-force
subgraph isomorphism, and for each pattern ordering r-packing, exact
r-cover and r-vector-sum on the reduced instance.  Every witness found on
the reduced side is lifted back to a map and checked; every brute-force map
is embedded and checked.  Construction sizes are checked against their
closed forms on every instance built.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence, TypeVar

from .core import Graph, SubIsoInstance, is_exact_cover, is_packing
from .errors import BudgetError, EquivalenceFailure, PreconditionError
from .io import graph_to_json
from .reduction import (
    OrderedPattern,
    as_xcover,
    base_gadget_size,
    build_psp_instance,
    compactness_ratio,
    embed_isomorphism_as_packing,
    enumerate_orderings,
    lift_packing_to_isomorphism,
    sort_pattern_for,
    vectorize_instance,
)
from .solvers import (
    SolveBudget,
    solve_exact_cover_bfs,
    solve_exact_cover_bnb,
    solve_set_packing_bnb,
    solve_set_packing_dp,
    solve_subiso_bruteforce,
    solve_vector_sum,
    xor_of,
)

DEFAULT_SEED = 20240607
MAX_SWEEP_VERTICES = 5
# The packing DP also runs as a cross-check on reduced instances up to this size.
DP_CROSS_CHECK_UNIVERSE = 20

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """``map`` that keeps input order; worker processes when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- size checks


def size_violations(red, vec=None) -> list[str]:
    """Closed-form size identities that fail on ``red`` (empty when all hold)."""
    g, h = red.source.g, red.source.h
    n, m, k, ell = g.n, g.edge_count, h.edge_count, h.n
    big_n = red.gadget.n_elems
    out = []
    u = red.family.universe_size
    if u != (ell + 2 * k) * big_n:
        out.append(f"universe {u} != (l+2k)N = {(ell + 2 * k) * big_n}")
    if red.r != k + ell:
        out.append(f"r {red.r} != k+l = {k + ell}")
    if red.v_set_count != ell * n * (n - 1) // 2:
        out.append(f"V-sets {red.v_set_count} != l*n(n-1)/2 = {ell * n * (n - 1) // 2}")
    if red.e_set_count != 2 * m * k:
        out.append(f"E-sets {red.e_set_count} != 2mk = {2 * m * k}")
    if red.mode == "paper":
        expect = 2 * math.ceil(math.log2(n + 1)) + 2
        if big_n != expect:
            out.append(f"paper-mode N {big_n} != 2*ceil(log2(n+1))+2 = {expect}")
    if vec is not None:
        if vec.dim != u + ell + 2 * k:
            out.append(f"dim {vec.dim} != |U|+l+2k = {u + ell + 2 * k}")
        if vec.target != (1 << vec.dim) - 1:
            out.append("vector-sum target is not all ones")
        if vec.r != red.r:
            out.append("vector-sum budget differs from r")
    return out


# ------------------------------------------------------------ per ordering


@dataclass
class OrderingOutcome:
    index: int
    ordering: tuple[int, ...]
    psp: bool
    xcover: bool
    vecsum: bool
    dp: bool | None = None
    bfs: bool | None = None
    lifts: int = 0
    size_checks: int = 0
    problems: list[dict] = field(default_factory=list)
    witness: tuple[int, ...] = ()

    @property
    def answers(self) -> dict[str, bool]:
        out = {"psp": self.psp, "xcover": self.xcover, "vecsum": self.vecsum}
        if self.dp is not None:
            out["psp-dp"] = self.dp
        if self.bfs is not None:
            out["xcover-bfs"] = self.bfs
        return out


def check_ordering(
    inst: SubIsoInstance,
    pattern: OrderedPattern,
    index: int,
    mode: str,
    budget: SolveBudget,
) -> OrderingOutcome:
    """Solve one ordering's instance every available way and lift each witness."""
    red = build_psp_instance(inst, pattern, mode)
    xred = as_xcover(red)
    vec = vectorize_instance(red)
    problems = [{"kind": "size", "detail": d} for d in size_violations(red, vec)]

    psp_found, psp_w = solve_set_packing_bnb(red.inst, budget)
    xc_found, xc_w = solve_exact_cover_bnb(xred.inst, budget)
    vs_found, vs_idx = solve_vector_sum(vec, budget)
    out = OrderingOutcome(index, pattern.p, psp_found, xc_found, vs_found)
    out.witness = tuple(psp_w.indices)

    u = red.family.universe_size
    if u <= min(DP_CROSS_CHECK_UNIVERSE, budget.max_universe_for_dp):
        best, _ = solve_set_packing_dp(red.inst, budget)
        out.dp = best >= red.r
    if u <= budget.max_universe_for_dp:
        cover = solve_exact_cover_bfs(xred.inst, budget)
        out.bfs = cover is not None and cover[0] <= red.r

    lifts = 0
    if psp_found:
        lift_packing_to_isomorphism(red, psp_w)
        lifts += 1
    if xc_found:
        lift_packing_to_isomorphism(xred, xc_w)
        lifts += 1
    if vs_found:
        if xor_of(vec, vs_idx) != vec.target:
            problems.append({"kind": "vecsum-witness", "detail": list(vs_idx)})
        elif not is_exact_cover(red.family, vs_idx):
            problems.append({"kind": "vecsum-not-cover", "detail": list(vs_idx)})
        else:
            lift_packing_to_isomorphism(xred, vs_idx)
            lifts += 1
    out.lifts = lifts
    out.size_checks = 1 if not any(p["kind"] == "size" for p in problems) else 0

    answers = out.answers
    if len(set(answers.values())) > 1:
        problems.append({"kind": "answers", "detail": answers})
    out.problems = problems
    return out


# ---------------------------------------------------------------- reports


@dataclass
class EquivalenceReport:
    g: Graph
    h: Graph
    mode: str
    subiso_answer: bool
    psp_answer: bool
    xcover_answer: bool
    vecsum_answer: bool
    orderings_checked: int
    lift_checks_passed: int
    embed_checks_passed: int
    size_checks_passed: int
    first_disagreement: dict | None = None
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return self.first_disagreement is None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["g"] = graph_to_json(self.g)
        d["h"] = graph_to_json(self.h)
        d["ok"] = self.ok
        return d


def _bundle(inst: SubIsoInstance, mode: str, detail: dict, seed) -> dict:
    return {
        "g": graph_to_json(inst.g),
        "h": graph_to_json(inst.h),
        "mode": mode,
        "seed": seed,
        **detail,
    }


class _OrderingTask:
    """Picklable closure for the parallel map."""

    def __init__(self, inst, mode, budget):
        self.inst, self.mode, self.budget = inst, mode, budget

    def __call__(self, item):
        index, pattern = item
        return check_ordering(self.inst, pattern, index, self.mode, self.budget)


def verify_equivalence(
    inst: SubIsoInstance,
    mode: str = "tight",
    budget: SolveBudget | None = None,
    full: bool = False,
    jobs: int = 1,
    seed: int | None = None,
    raise_on_failure: bool = True,
) -> EquivalenceReport:
    """Check that all four decision procedures agree on ``inst``.

    Orderings are processed in lexicographic order.  Unless ``full`` is set,
    processing stops after the first ordering whose instance is a yes; with
    ``jobs > 1`` orderings are solved in batches and the same prefix is kept,
    so the report does not depend on the worker count.

    Any disagreement raises ``EquivalenceFailure`` with a self-contained
    reproduction bundle, or is recorded in ``first_disagreement`` when
    ``raise_on_failure`` is false.  A witness that fails to lift raises
    ``SoundnessViolation`` regardless.
    """
    budget = budget or SolveBudget()
    phi = solve_subiso_bruteforce(inst, budget)
    subiso = phi is not None

    items = list(enumerate(enumerate_orderings(inst.h, budget.max_pattern_vertices)))
    task = _OrderingTask(inst, mode, budget)
    batch = max(1, jobs)
    outcomes: list[OrderingOutcome] = []
    for start in range(0, len(items), batch):
        chunk = parallel_map(task, items[start : start + batch], jobs)
        stop = False
        for oc in chunk:
            outcomes.append(oc)
            if not full and (oc.psp or oc.xcover or oc.vecsum or oc.problems):
                stop = True
                break
        if stop:
            break

    disagreement = None
    for oc in outcomes:
        if oc.problems:
            disagreement = {
                "ordering_index": oc.index,
                "ordering": list(oc.ordering),
                "witness": list(oc.witness),
                "problems": oc.problems,
            }
            break

    psp = any(oc.psp for oc in outcomes)
    xcover = any(oc.xcover for oc in outcomes)
    vecsum = any(oc.vecsum for oc in outcomes)
    if disagreement is None and len({subiso, psp, xcover, vecsum}) > 1:
        disagreement = {
            "problems": [
                {
                    "kind": "answers",
                    "detail": {"subiso": subiso, "psp": psp, "xcover": xcover, "vecsum": vecsum},
                }
            ],
            "map": list(phi.map) if phi else None,
        }

    embeds = 0
    if phi is not None:
        embeds = _check_embedding(inst, phi, mode)
        if embeds == 0 and disagreement is None:
            disagreement = {"problems": [{"kind": "embed"}], "map": list(phi.map)}

    report = EquivalenceReport(
        g=inst.g,
        h=inst.h,
        mode=mode,
        subiso_answer=subiso,
        psp_answer=psp,
        xcover_answer=xcover,
        vecsum_answer=vecsum,
        orderings_checked=len(outcomes),
        lift_checks_passed=sum(oc.lifts for oc in outcomes),
        embed_checks_passed=embeds,
        size_checks_passed=sum(oc.size_checks for oc in outcomes),
        first_disagreement=disagreement,
        seed=seed,
    )
    if disagreement is not None and raise_on_failure:
        raise EquivalenceFailure(
            f"reduction answers disagree on G={inst.g.edges}, H={inst.h.edges}",
            _bundle(inst, mode, disagreement, seed),
        )
    return report


def _check_embedding(inst: SubIsoInstance, phi, mode: str) -> int:
    """Embed ``phi`` in its sorted ordering; 1 if the result is a packing, cover and vector sum."""
    pattern = sort_pattern_for(inst, phi)
    red = build_psp_instance(inst, pattern, mode)
    w = embed_isomorphism_as_packing(red, phi)
    if len(w) != red.r or not is_packing(red.family, w) or not is_exact_cover(red.family, w):
        return 0
    vec = vectorize_instance(red)
    if xor_of(vec, w.indices) != vec.target:
        return 0
    return 1


# ---------------------------------------------------------------- sweeps


def all_labeled_graphs(n: int) -> list[Graph]:
    """Every graph on ``1..n``, ordered by edge bitmask over ``combinations``."""
    pairs = list(combinations(range(1, n + 1), 2))
    out = []
    for mask in range(1 << len(pairs)):
        edges = tuple(p for b, p in enumerate(pairs) if mask >> b & 1)
        out.append(Graph(n, edges))
    return out


class _PairTask:
    def __init__(self, h, mode, budget, full, seed):
        self.h, self.mode, self.budget, self.full, self.seed = h, mode, budget, full, seed

    def __call__(self, g: Graph) -> EquivalenceReport:
        return verify_equivalence(
            SubIsoInstance(g, self.h),
            self.mode,
            self.budget,
            full=self.full,
            seed=self.seed,
            raise_on_failure=False,
        )


def verify_many(
    graphs: Iterable[Graph],
    h: Graph,
    mode: str = "tight",
    budget: SolveBudget | None = None,
    full: bool = False,
    jobs: int = 1,
    seed: int | None = None,
) -> list[EquivalenceReport]:
    """``verify_equivalence`` on each host, failures recorded rather than raised."""
    task = _PairTask(h, mode, budget or SolveBudget(), full, seed)
    return parallel_map(task, list(graphs), jobs)


def sweep_exhaustive(
    n: int,
    h: Graph,
    mode: str = "tight",
    budget: SolveBudget | None = None,
    full: bool = False,
    jobs: int = 1,
) -> list[EquivalenceReport]:
    """Reports for every labelled host on ``n`` vertices, in edge-bitmask order."""
    if n > MAX_SWEEP_VERTICES:
        raise BudgetError(f"exhaustive sweep is capped at n = {MAX_SWEEP_VERTICES}")
    if n < 1:
        raise PreconditionError("host needs at least one vertex")
    return verify_many(all_labeled_graphs(n), h, mode, budget, full, jobs)


def monotone_violations(reports: Sequence[EquivalenceReport]) -> list[tuple[Graph, Graph]]:
    """Pairs ``(G, G + e)`` where adding an edge turned a yes into a no."""
    by_edges = {(r.g.n, r.g.edges): r for r in reports}
    bad = []
    for rep in reports:
        if not rep.psp_answer:
            continue
        g = rep.g
        for pair in combinations(range(1, g.n + 1), 2):
            if g.has_edge(*pair):
                continue
            bigger = tuple(sorted(g.edges + (pair,)))
            other = by_edges.get((g.n, bigger))
            if other is not None and not other.psp_answer:
                bad.append((g, other.g))
    return bad


# ----------------------------------------------------------- compactness


@dataclass(frozen=True)
class CompactnessRecord:
    n: int
    m: int
    k: int
    ell: int
    big_n: int
    r: int
    universe_size: int
    set_count: int
    ratio: float
    built: bool

    def violations(self) -> list[str]:
        out = []
        if self.universe_size != (self.ell + 2 * self.k) * self.big_n:
            out.append("universe size")
        if self.r != self.k + self.ell:
            out.append("r")
        expected_sets = self.ell * self.n * (self.n - 1) // 2 + 2 * self.m * self.k
        if self.set_count != expected_sets:
            out.append("set count")
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["l"] = d.pop("ell")
        d["N"] = d.pop("big_n")
        return d


def default_host(n: int) -> Graph:
    """Cycle on ``n >= 3`` vertices, a single edge or vertex below that."""
    if n >= 3:
        return Graph(n, tuple((i, i + 1) for i in range(1, n)) + ((1, n),))
    return Graph(n, ((1, 2),) if n == 2 else ())


def compactness_record(g: Graph, h: Graph, mode: str, build_limit: int = 200_000):
    """Sizes of the identity-ordering instance, built when small enough."""
    n, m, k, ell = g.n, g.edge_count, h.edge_count, h.n
    predicted = ell * n * (n - 1) // 2 + 2 * m * k
    if predicted <= build_limit:
        pattern = OrderedPattern(h, tuple(range(1, ell + 1)))
        red = build_psp_instance(SubIsoInstance(g, h), pattern, mode)
        big_n, u, sets, r = red.gadget.n_elems, red.family.universe_size, len(red.family), red.r
        built = True
    else:
        big_n = base_gadget_size(n, mode)
        u, sets, r = (ell + 2 * k) * big_n, predicted, k + ell
        built = False
    return CompactnessRecord(
        n, m, k, ell, big_n, r, u, sets, compactness_ratio(u, r, sets), built
    )


def compactness_sweep(
    n_values: Iterable[int],
    h: Graph,
    mode: str = "paper",
    host: Callable[[int], Graph] = default_host,
    build_limit: int = 200_000,
) -> list[CompactnessRecord]:
    """One record per host size; large instances are sized from closed forms."""
    return [compactness_record(host(n), h, mode, build_limit) for n in n_values]
