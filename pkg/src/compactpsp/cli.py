"""Command-line entry point: gen-iss, reduce, solve, verify, bench.

Exit codes: 0 found / all checks passed, 1 decided no / disagreement,
2 budget exceeded or bad input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .core import SubIsoInstance
from .errors import BudgetError, CompactPspError
from .gadget import build_compatible_iss, check_compatible_pair
from .generators import (
    BenchConfig,
    bench_dichotomy,
    dp_doubling_slopes,
    pattern_by_name,
    random_pairs,
    rows_to_csv,
)
from .harness import DEFAULT_SEED, all_labeled_graphs, monotone_violations, verify_many
from .io import (
    dumps,
    graph_from_json,
    iss_pair_to_json,
    isomorphism_to_json,
    load_problem,
    read_json,
    reduced_to_json,
    reduction_summary,
    witness_to_json,
    write_json,
)
from .reduction import MODES, build_psp_instance, enumerate_orderings, ordering_count
from .solvers import (
    SolveBudget,
    solve_exact_cover_bfs,
    solve_exact_cover_bnb,
    solve_set_packing_bnb,
    solve_set_packing_dp,
    solve_subiso_bruteforce,
    solve_vector_sum,
)

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

VERSION_TEXT = f"""compactpsp {__version__}
gadget sizes (N elements, M = C(N, N/2) / 2 host vertices per gadget):
  paper: N = 2 * ceil(log2(n + 1)) + 2
  tight: smallest even N with C(N, N/2) / 2 >= n
reduced instance: |U| = (l + 2k) * N, r = k + l, vector dimension |U| + l + 2k"""

ALGOS = {
    "psp": ("dp", "bnb"),
    "xcover": ("bfs", "bnb"),
    "vecsum": ("enum",),
    "subiso": ("enum",),
}


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    budget: SolveBudget = field(default_factory=SolveBudget)
    mode: str = "tight"
    jobs: int = 1


def _budget(args) -> SolveBudget:
    kwargs = {}
    if getattr(args, "time_limit", None):
        kwargs["time_limit"] = args.time_limit
    if getattr(args, "max_nodes", None):
        kwargs["max_subsets_enumerated"] = args.max_nodes
    return SolveBudget(**kwargs)


# ---------------------------------------------------------------- gen-iss


def cmd_gen_iss(args) -> int:
    pair = build_compatible_iss(args.n_elems)
    report = check_compatible_pair(pair) if args.check else None
    text = dumps(iss_pair_to_json(pair, report))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if report is None:
        return EXIT_YES
    for check in report.checks:
        print(f"{check.name}: {'ok' if check.passed else 'FAILED'}", file=sys.stderr)
    return EXIT_YES if report.ok else EXIT_NO


# ---------------------------------------------------------------- reduce


def cmd_reduce(args) -> int:
    g = graph_from_json(read_json(args.graph))
    h = pattern_by_name(args.pattern)
    inst = SubIsoInstance(g, h)
    orderings = list(enumerate(enumerate_orderings(h)))
    if args.ordering != "all":
        idx = int(args.ordering)
        if not 0 <= idx < len(orderings):
            raise CompactPspError(f"ordering index must be in [0, {len(orderings)})")
        orderings = [orderings[idx]]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    summary = None
    for idx, pattern in orderings:
        red = build_psp_instance(inst, pattern, args.gadget)
        name = f"instance_{idx:05d}.json"
        write_json(out / name, reduced_to_json(red, args.target))
        files.append({"ordering_index": idx, "ordering": list(pattern.p), "file": name})
        summary = reduction_summary(red)
    manifest = {
        "target": args.target,
        "mode": args.gadget,
        "seed": args.seed,
        "orderings_total": ordering_count(h),
        **(summary or {}),
        "instances": files,
    }
    write_json(out / "manifest.json", manifest)
    print(f"wrote {len(files)} instance(s) to {out}", file=sys.stderr)
    return EXIT_YES


# ---------------------------------------------------------------- solve


def solve_problem(problem: str, inst, algo: str, budget: SolveBudget, r: int | None):
    """``(found, result dict, witness JSON or None)`` for one instance."""
    if algo not in ALGOS[problem]:
        raise CompactPspError(f"algorithm {algo!r} does not apply to {problem}")
    if problem == "subiso":
        phi = solve_subiso_bruteforce(inst, budget)
        wit = isomorphism_to_json(phi) if phi else None
        return phi is not None, {"found": phi is not None}, wit
    target = inst.r if r is None else r
    if problem == "psp":
        if algo == "dp":
            best, w = solve_set_packing_dp(inst, budget)
            found = best >= target
            return found, {"found": found, "r": target, "max_size": best}, witness_to_json(w)
        found, w = solve_set_packing_bnb(inst, budget, target)
    elif problem == "xcover":
        if algo == "bfs":
            cover = solve_exact_cover_bfs(inst, budget)
            found = cover is not None and cover[0] <= target
            res = {"found": found, "r": target, "min_size": cover[0] if cover else None}
            return found, res, witness_to_json(cover[1]) if cover else None
        found, w = solve_exact_cover_bnb(inst, budget, target)
    else:
        found, idx = solve_vector_sum(inst, budget, target)
        res = {"found": found, "r": target}
        return found, res, {"indices": list(idx)} if found else None
    return found, {"found": found, "r": target}, witness_to_json(w) if found else None


def cmd_solve(args) -> int:
    inst = load_problem(read_json(args.inp), args.problem)
    found, result, wit = solve_problem(args.problem, inst, args.algo, _budget(args), args.r)
    sys.stdout.write(dumps({"problem": args.problem, "algo": args.algo, **result}))
    if args.witness and wit is not None:
        write_json(args.witness, wit)
    return EXIT_YES if found else EXIT_NO


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    h = pattern_by_name(args.pattern)
    budget = _budget(args)
    reports = []
    for n in range(args.n_min, args.n_max + 1):
        if args.random:
            graphs = [g for g, _ in random_pairs(args.random, [n], [args.pattern], args.seed + n)]
        else:
            graphs = all_labeled_graphs(n)
        batch = verify_many(graphs, h, args.mode, budget, args.full, args.jobs, args.seed)
        bad = [r for r in batch if not r.ok]
        yes = sum(r.psp_answer for r in batch)
        print(
            f"n={n}: {len(batch)} hosts, {yes} yes, {len(bad)} disagreements",
            file=sys.stderr,
        )
        reports.extend(batch)
    mono = [] if args.random else monotone_violations(reports)
    failed = [r for r in reports if not r.ok]
    if args.report:
        write_json(
            args.report,
            {
                "pattern": args.pattern,
                "mode": args.mode,
                "seed": args.seed,
                "full": args.full,
                "disagreements": len(failed),
                "monotone_violations": len(mono),
                "reports": [r.to_dict() for r in reports],
            },
        )
    if mono:
        print(f"{len(mono)} monotonicity violations", file=sys.stderr)
    return EXIT_NO if failed or mono else EXIT_YES


# ---------------------------------------------------------------- bench


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def cmd_bench(args) -> int:
    cfg = BenchConfig(
        universes=args.universe,
        set_counts=args.sets,
        r=args.r,
        density=args.density,
        seed=args.seed,
        repeats=args.repeats,
    )
    rows = bench_dichotomy(cfg, _budget(args))
    text = rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
        write_json(
            Path(args.out).with_suffix(".meta.json"),
            {"seed": args.seed, "density": args.density, "repeats": args.repeats},
        )
    else:
        sys.stdout.write(text)
    print(f"seed={args.seed}", file=sys.stderr)
    for s, slope in dp_doubling_slopes(rows).items():
        print(f"dp log2-time slope per element at {s} sets: {slope:.3f}", file=sys.stderr)
    return EXIT_YES if all(r.agree for r in rows) else EXIT_NO


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compactpsp",
        description=__doc__.splitlines()[0],
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=VERSION_TEXT)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--time-limit", type=float, default=None, help="seconds per solver call")
        p.add_argument("--max-nodes", type=int, default=None, help="search-node cap per solver call")

    p = sub.add_parser("gen-iss", help="build and check a compatible ISS pair")
    p.add_argument("--n-elems", type=int, required=True, help="even ground-set size N")
    p.add_argument("--check", action="store_true", help="validate the pair and embed the report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_iss)

    p = sub.add_parser("reduce", help="write one reduced instance per pattern ordering")
    p.add_argument("--target", choices=("psp", "xcover", "vecsum"), default="psp")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True, help="edge, p3, k3, c4, paw or a graph .json")
    p.add_argument("--gadget", choices=MODES, default="paper")
    p.add_argument("--ordering", default="all", help="ordering index or 'all'")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="decide one instance")
    p.add_argument("problem", choices=sorted(ALGOS))
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--algo", required=True, choices=("dp", "bfs", "bnb", "enum"))
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--witness")
    common(p, seed=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check reduction equivalence over many hosts")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--pattern", default="k3")
    p.add_argument("--mode", choices=MODES, default="tight")
    p.add_argument("--full", action="store_true", help="solve every ordering")
    p.add_argument("--random", type=int, default=0, help="sample this many hosts per n")
    p.add_argument("--report")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the DP against branch-and-bound (CSV)")
    p.add_argument("--universe", type=_int_list, default=BenchConfig.universes)
    p.add_argument("--sets", type=_int_list, default=BenchConfig.set_counts)
    p.add_argument("--r", type=int, default=BenchConfig.r)
    p.add_argument("--density", type=float, default=BenchConfig.density)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (CompactPspError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
